//! Regime constants and the certified robust/explosive classification.

use num_bigint::BigInt;
use num_traits::One;

use crate::engine::SplittingOrder;
use crate::numeric::{int, rat, Rational};

/// Constants of the diagonal-front argument for explosion in the parallel
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryConstants {
    pub d: usize,
    /// `d!/(2d)^d * sum_{l=2..d} (2d)^l / l!`
    pub p: Rational,
    /// `d!/(2d)^(d-1)`
    pub q: Rational,
    /// Solution of `q + p*h = 2d(1 - h)`.
    pub h_star: Rational,
    /// `max(1 - 1/d, h_star)`
    pub c_prime: Rational,
    /// `1 - 3/(4d+2)`
    pub upper_bound: Rational,
    /// `(q - 2d)/(p + 2d)`, the sign-flipped closed form; kept for
    /// diagnostics only, it does not solve the defining equation.
    pub flipped_closed_form: Rational,
}

fn factorial(k: usize) -> BigInt {
    (1..=k as u64).map(BigInt::from).product()
}

fn pow(base: usize, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(base as u64), e)
}

/// Exact constants for `d >= 1` (meaningful for `d >= 2`).
pub fn theory_constants(d: usize) -> TheoryConstants {
    assert!(d >= 1);
    let two_d = 2 * d;
    let df = Rational::from_integer(factorial(d));
    let sum: Rational = (2..=d)
        .map(|l| Rational::new(pow(two_d, l), factorial(l)))
        .fold(int(0), |a, b| a + b);
    let p = &df / Rational::from_integer(pow(two_d, d)) * sum;
    let q = &df / Rational::from_integer(pow(two_d, d - 1));
    let tdr = int(two_d as i64);
    let h_star = (&tdr - &q) / (&p + &tdr);
    let flipped_closed_form = (&q - &tdr) / (&p + &tdr);
    let floor = Rational::one() - rat(1, d as i64);
    let c_prime = if h_star > floor { h_star.clone() } else { floor };
    let upper_bound = Rational::one() - rat(3, 4 * d as i64 + 2);
    TheoryConstants { d, p, q, h_star, c_prime, upper_bound, flipped_closed_form }
}

impl TheoryConstants {
    /// `q + p*h* == 2d(1 - h*)`
    pub fn satisfies_definition(&self) -> bool {
        let two_d = int(2 * self.d as i64);
        &self.q + &self.p * &self.h_star == two_d * (Rational::one() - &self.h_star)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Robust,
    Explosive,
    Unknown,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Robust => "robust",
            Regime::Explosive => "explosive",
            Regime::Unknown => "unknown",
        }
    }
}

/// The proven classification of a background value.
///
/// Robust below `1/2`; explosive from `1 - 1/(2d)` for every order, and for
/// the parallel order from `C_d'` (`d >= 3`) or `13/19` (`d = 2`).
pub fn certified_regime(h: &Rational, d: usize, order: SplittingOrder) -> Regime {
    if h < &rat(1, 2) {
        return Regime::Robust;
    }
    if h >= &(Rational::one() - rat(1, 2 * d as i64)) {
        return Regime::Explosive;
    }
    if order == SplittingOrder::Parallel {
        let threshold = match d {
            2 => rat(13, 19),
            d if d >= 3 => theory_constants(d).c_prime,
            _ => return Regime::Unknown,
        };
        if h >= &threshold {
            return Regime::Explosive;
        }
    }
    Regime::Unknown
}
