//! Exact scalar arithmetic: arbitrary-precision rationals and binomial
//! coefficients. Every quantity in this crate is exact; there is no floating
//! point anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision integer.
pub type Int = BigInt;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (guaranteed by `num_rational::Ratio`).
pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("invalid rational literal `{0}` (expected `p`, `-p` or `p/q`)")]
    Invalid(String),
    #[error("zero denominator in rational literal `{0}`")]
    ZeroDenominator(String),
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(Int::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

/// Parses `"p"`, `"-p"` or `"p/q"` into a rational in lowest terms.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    let invalid = || ParseRationalError::Invalid(s.to_string());
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let numer: Int = num_str.parse().map_err(|_| invalid())?;
    let denom: Int = match den_str {
        Some(d) => d.parse().map_err(|_| invalid())?,
        None => Int::one(),
    };
    if denom.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(numer, denom))
}

/// Renders a rational as `p` when the denominator is one, else `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Binomial coefficient with the usual out-of-range convention:
/// `binomial(n, k) = 0` for `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> Int {
    if k < 0 || (k as u64) > n {
        return Int::zero();
    }
    num_integer::binomial(Int::from(n), Int::from(k))
}

/// Least common multiple of the denominators of `values` (1 for an empty
/// slice). Multiplying every value by this clears all fractions.
pub fn denominator_lcm(values: &[Rational]) -> Int {
    let mut l = Int::one();
    for v in values {
        l = l.lcm(v.denom());
    }
    l.abs()
}

/// Gcd of two big integers via Lehmer's algorithm (single-word quotient
/// batching). The stock binary gcd is a serious bottleneck at the operand
/// sizes the rank engine produces; this one is ~20x faster there.
pub fn big_gcd(a: &Int, b: &Int) -> Int {
    use num_traits::ToPrimitive;
    let mut u = a.magnitude().clone();
    let mut v = b.magnitude().clone();
    if u < v {
        std::mem::swap(&mut u, &mut v);
    }
    while !v.is_zero() {
        if v.bits() <= 64 {
            let vv = v.to_u64().expect("fits by bit count");
            let r = (&u % vv).to_u64().expect("remainder below modulus");
            return Int::from(word_gcd(vv, r));
        }
        // simulate Euclid on the top word of both operands (same shift),
        // accumulating the quotient matrix while it is provably correct
        let shift = u.bits() - 63;
        let mut x = (&u >> shift).to_i128().expect("63-bit window");
        let mut y = (&v >> shift).to_i128().expect("63-bit window");
        let (mut ma, mut mb, mut mc, mut md) = (1i128, 0i128, 0i128, 1i128);
        loop {
            if y + mc == 0 || y + md == 0 {
                break;
            }
            let q = (x + ma) / (y + mc);
            if q != (x + mb) / (y + md) {
                break;
            }
            let (na, nb) = (mc, md);
            let (nc, nd) = (ma - q * mc, mb - q * md);
            let (nx, ny) = (y, x - q * y);
            ma = na;
            mb = nb;
            mc = nc;
            md = nd;
            x = nx;
            y = ny;
        }
        if mb == 0 {
            // window produced nothing: one full-precision reduction
            let r = &u % &v;
            u = std::mem::replace(&mut v, r);
        } else {
            let iu = Int::from(u);
            let iv = Int::from(v);
            let nu = (&iu * ma + &iv * mb).abs();
            let nv = (&iu * mc + &iv * md).abs();
            u = nu.into_parts().1;
            v = nv.into_parts().1;
            if u < v {
                std::mem::swap(&mut u, &mut v);
            }
        }
    }
    Int::from(u)
}

fn word_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["5", "-9", "7/3", "-22/7", "0"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        // reduction and denominator sign normalisation
        assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert_eq!(format_rational(&parse_rational("3/-6").unwrap()), "-1/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn binomial_basic() {
        assert_eq!(binomial(4, 2), Int::from(6));
        assert_eq!(binomial(7, -1), Int::from(0));
        assert_eq!(binomial(7, 8), Int::from(0));
        assert_eq!(binomial(0, 0), Int::from(1));
    }

    #[test]
    fn binomial_rank_three_bound_sequence() {
        // binomial(M+r-1, M) for r = 3 gives 3, 6, 10, 15.
        let got: Vec<Int> = (1..=4).map(|m| binomial(m + 2, m as i64)).collect();
        let want: Vec<Int> = [3, 6, 10, 15].iter().map(|&x| Int::from(x)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn binomial_pascal_identity() {
        for n in 0..=30u64 {
            for k in 0..=n as i64 {
                assert_eq!(
                    &binomial(n, k) + &binomial(n, k + 1),
                    binomial(n + 1, k + 1),
                    "Pascal fails at n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn big_gcd_matches_reference() {
        use num_integer::Integer as _;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6cd);
        for _ in 0..200 {
            let bits_a = rng.gen_range(0..600usize);
            let bits_b = rng.gen_range(0..600usize);
            let make = |rng: &mut rand_chacha::ChaCha8Rng, bits: usize| -> Int {
                let mut x = Int::from(0);
                for _ in 0..(bits / 32 + 1) {
                    x = (x << 32) + Int::from(rng.gen::<u32>());
                }
                if rng.gen::<bool>() {
                    x = -x;
                }
                x
            };
            let a = make(&mut rng, bits_a);
            let b = make(&mut rng, bits_b);
            assert_eq!(big_gcd(&a, &b), a.gcd(&b), "a={a} b={b}");
        }
        // shared large factor
        let p: Int = Int::from(1_000_000_007i64).pow(40);
        let a = &p * Int::from(1234567u64);
        let b = &p * Int::from(7654321u64);
        assert_eq!(big_gcd(&a, &b), &p * Int::from(word_gcd(1234567, 7654321)));
        assert_eq!(big_gcd(&a, &Int::zero()), a.abs());
    }

    #[test]
    fn denominator_lcm_clears_fractions() {
        let vals = [rat_frac(1, 6), rat_frac(3, 4), rat(2)];
        let l = denominator_lcm(&vals);
        assert_eq!(l, Int::from(12));
        for v in &vals {
            assert!((v * Rational::from_integer(l.clone())).is_integer());
        }
    }
}
