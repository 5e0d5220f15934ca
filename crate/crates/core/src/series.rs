//! Truncated formal power series with exact rational coefficients:
//! fixed-point solutions, the partial-series systems behind the censuses,
//! and the compositional-inversion identity between the two dimension
//! series.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::dendriform::{CensusByRoot, OpLabel};
use crate::dias::DiasCensus;
use crate::ktrees::{binomial, fuss_catalan};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("composition requires the inner series to have zero constant term")]
    NonzeroConstantTerm,
    #[error("reciprocal requires a nonzero constant term")]
    ZeroConstantTerm,
}

/// A power series truncated at a fixed order; all arithmetic is exact
/// through that order.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<BigRational>, // length = order + 1
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        TruncSeries {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// The series `x`.
    pub fn x(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = BigRational::one();
        }
        s
    }

    pub fn from_rationals(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty());
        TruncSeries { coeffs }
    }

    pub fn from_ints(coeffs: Vec<BigInt>) -> Self {
        Self::from_rationals(coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    /// Build from a coefficient function, `c(k)` for `k = 0..=order`.
    pub fn from_fn(order: usize, c: impl Fn(usize) -> BigRational) -> Self {
        TruncSeries {
            coeffs: (0..=order).map(c).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        let order = self.order().min(other.order());
        TruncSeries::from_fn(order, |k| f(&self.coeffs[k], &other.coeffs[k]))
    }

    pub fn neg(&self) -> Self {
        TruncSeries::from_fn(self.order(), |k| -self.coeffs[k].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        TruncSeries { coeffs }
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut out = TruncSeries::one(self.order());
        for _ in 0..exponent {
            out = out.mul(self);
        }
        out
    }

    /// Substitute `g` into `self`; `g` must have zero constant term.
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        if !g.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let order = self.order().min(g.order());
        let mut out = TruncSeries::zero(order);
        for k in (0..=order).rev() {
            out = out.mul(g);
            out.coeffs[0] += &self.coeffs[k];
        }
        Ok(out)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let order = self.order();
        let mut inv = vec![BigRational::zero(); order + 1];
        inv[0] = self.coeffs[0].recip();
        for k in 1..=order {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &inv[k - j];
            }
            inv[k] = -acc / &self.coeffs[0];
        }
        Ok(TruncSeries { coeffs: inv })
    }

    /// `f(-x)`: flip the sign of odd coefficients.
    pub fn substitute_neg_x(&self) -> Self {
        TruncSeries::from_fn(self.order(), |k| {
            if k % 2 == 0 {
                self.coeffs[k].clone()
            } else {
                -self.coeffs[k].clone()
            }
        })
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*x^{k}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The unique power-series fixed point of `U = (1 + xU)^(m+1)`; the
/// coefficient of `x^k` is the Fuss-Catalan number for `k + 1` nodes.
pub fn solve_dendriform_series(m: usize, order: usize) -> TruncSeries {
    let x = TruncSeries::x(order);
    let one = TruncSeries::one(order);
    let mut u = one.clone();
    // Contraction in the x-adic metric: each iteration fixes one more
    // coefficient, so order + 1 rounds suffice.
    for _ in 0..=order {
        u = one.add(&x.mul(&u)).pow(m as u32 + 1);
    }
    debug_assert_eq!(u, one.add(&x.mul(&u)).pow(m as u32 + 1));
    u
}

/// Solve the fixed point and compare its coefficients with the closed
/// form, coefficient `k` against the count for `k + 1` nodes.
pub fn fixed_point_check(m: usize, order: usize) -> (TruncSeries, SeriesCheck) {
    let u = solve_dendriform_series(m, order);
    let closed = TruncSeries::from_fn(order, |k| {
        BigRational::from_integer(fuss_catalan(m, k + 1))
    });
    let first_mismatch = compare("U coefficients = Fuss-Catalan", &u, &closed);
    let check = SeriesCheck {
        pass: first_mismatch.is_none(),
        first_mismatch,
    };
    (u, check)
}

/// The dimension series of the dual normal forms, `1 / (1 - x)^(m+1)`.
pub fn dias_series(m: usize, order: usize) -> TruncSeries {
    let one = TruncSeries::one(order);
    one.sub(&TruncSeries::x(order))
        .pow(m as u32 + 1)
        .reciprocal()
        .expect("constant term is one")
}

/// Outcome of a coefficientwise comparison; carries the first mismatch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCheck {
    pub pass: bool,
    pub first_mismatch: Option<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub equation: String,
    pub coefficient: usize,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

fn compare(name: &str, lhs: &TruncSeries, rhs: &TruncSeries) -> Option<Mismatch> {
    let order = lhs.order().min(rhs.order());
    (0..=order)
        .find(|&k| lhs.coeff(k) != rhs.coeff(k))
        .map(|k| Mismatch {
            equation: name.to_string(),
            coefficient: k,
            lhs: lhs.coeff(k).clone(),
            rhs: rhs.coeff(k).clone(),
        })
}

/// Verify the partial-series system against the actual census of normal
/// trees grouped by root label, plus the closed partial forms.
///
/// The system is, writing `P` for the root-`Prec` series and `M_i` for the
/// root-`Mid(i)` ones:
/// `U = 1 + P + sum M_i + S`, `P = x (U - P) U`,
/// `M_i = x (U - P) (U - P - sum_{j<i} M_j)`, `S = x U`,
/// with closed forms `P = U xU/(1+xU)` and `M_i = U xU/(1+xU)^(i+1)`.
pub fn check_partial_system(m: usize, order: usize, census: &CensusByRoot) -> SeriesCheck {
    assert!(census.total.len() > order, "census too short for the order");
    let series_of = |counts: &[BigInt]| {
        TruncSeries::from_ints(counts.iter().take(order + 1).cloned().collect())
    };
    let u = series_of(&census.total);
    let p = series_of(&census.by_root[&OpLabel::Prec]);
    let s = series_of(&census.by_root[&OpLabel::Succ]);
    let mids: Vec<TruncSeries> = (1..m)
        .map(|i| series_of(&census.by_root[&OpLabel::Mid(i)]))
        .collect();

    let x = TruncSeries::x(order);
    let one = TruncSeries::one(order);
    let mut checks: Vec<Option<Mismatch>> = Vec::new();

    // U = 1 + P + sum M_i + S
    let mut total = one.add(&p).add(&s);
    for mi in &mids {
        total = total.add(mi);
    }
    checks.push(compare("U = 1 + sum of partial series", &u, &total));

    // P = x (U - P) U
    let u_minus_p = u.sub(&p);
    checks.push(compare("P = x(U - P)U", &p, &x.mul(&u_minus_p).mul(&u)));

    // M_i = x (U - P)(U - P - sum_{j<i} M_j)
    let mut remainder = u_minus_p.clone();
    for (idx, mi) in mids.iter().enumerate() {
        checks.push(compare(
            &format!("M_{} = x(U - P)(U - P - sum_(j<{}) M_j)", idx + 1, idx + 1),
            mi,
            &x.mul(&u_minus_p).mul(&remainder),
        ));
        remainder = remainder.sub(mi);
    }

    // S = x U
    checks.push(compare("S = xU", &s, &x.mul(&u)));

    // Closed forms: P = U xU/(1+xU), M_i = U xU/(1+xU)^(i+1).
    let xu = x.mul(&u);
    let one_plus_xu = one.add(&xu);
    let base = u.mul(&xu);
    let inv = one_plus_xu.reciprocal().expect("constant term one");
    let mut power = inv.clone();
    checks.push(compare("P = U xU/(1+xU)", &p, &base.mul(&power)));
    for (idx, mi) in mids.iter().enumerate() {
        power = power.mul(&inv);
        checks.push(compare(
            &format!("M_{} = U xU/(1+xU)^{}", idx + 1, idx + 2),
            mi,
            &base.mul(&power),
        ));
    }

    let first_mismatch = checks.into_iter().flatten().next();
    SeriesCheck {
        pass: first_mismatch.is_none(),
        first_mismatch,
    }
}

/// Verify the dual census against the system `D = x/(1-x)`,
/// `N_i = x/(1-x)^(i+1)`, `R = xU`, `U = 1/(1-x)^(m+1)`, coefficientwise.
pub fn check_dias_system(m: usize, order: usize, census: &DiasCensus) -> SeriesCheck {
    use crate::dias::DiasLabel;
    assert!(census.total.len() > order, "census too short for the order");
    let series_of = |counts: &[BigInt]| {
        TruncSeries::from_ints(counts.iter().take(order + 1).cloned().collect())
    };
    let u = series_of(&census.total);
    let x = TruncSeries::x(order);
    let one = TruncSeries::one(order);
    let inv_one_minus_x = one.sub(&x).reciprocal().expect("constant one");

    let mut checks = vec![compare("U = 1/(1-x)^(m+1)", &u, &dias_series(m, order))];
    checks.push(compare(
        "D = x/(1-x)",
        &series_of(&census.by_root[&DiasLabel::DLeft]),
        &x.mul(&inv_one_minus_x),
    ));
    let mut power = inv_one_minus_x.clone();
    for i in 1..m {
        power = power.mul(&inv_one_minus_x);
        checks.push(compare(
            &format!("N_{i} = x/(1-x)^{}", i + 1),
            &series_of(&census.by_root[&DiasLabel::DMid(i)]),
            &x.mul(&power),
        ));
    }
    checks.push(compare(
        "R = xU",
        &series_of(&census.by_root[&DiasLabel::DRight]),
        &x.mul(&u),
    ));

    let first_mismatch = checks.into_iter().flatten().next();
    SeriesCheck {
        pass: first_mismatch.is_none(),
        first_mismatch,
    }
}

/// The two dimension series are compositional inverses up to signs:
/// `f(-h(-x)) = x` and `h(-f(-x)) = x`, with
/// `f = sum_(n>=1) C^(m)_n x^n` and `h = sum_(n>=1) binom(n+m-1, n-1) x^n`.
pub fn koszul_inversion_check(m: usize, order: usize) -> SeriesCheck {
    let f = TruncSeries::from_fn(order, |n| {
        if n == 0 {
            BigRational::zero()
        } else {
            BigRational::from_integer(fuss_catalan(m, n))
        }
    });
    let h = TruncSeries::from_fn(order, |n| {
        if n == 0 {
            BigRational::zero()
        } else {
            BigRational::from_integer(binomial(n + m - 1, n - 1))
        }
    });
    let x = TruncSeries::x(order);
    let minus_h_neg = h.substitute_neg_x().neg();
    let minus_f_neg = f.substitute_neg_x().neg();
    let first_mismatch = compare(
        "f(-h(-x)) = x",
        &f.compose(&minus_h_neg).expect("zero constant term"),
        &x,
    )
    .or_else(|| {
        compare(
            "h(-f(-x)) = x",
            &h.compose(&minus_f_neg).expect("zero constant term"),
            &x,
        )
    });
    SeriesCheck {
        pass: first_mismatch.is_none(),
        first_mismatch,
    }
}
