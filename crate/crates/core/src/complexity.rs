//! Character complexity `C(u) = (1/|G|) sum_i |chi_i(u)|^2 / d_i`, its
//! bounds and multiplicativity checks, and the hypersphere radius map.

use serde::{Deserialize, Serialize};

use crate::chartable::{character_table, CharacterTable};
use crate::error::{Error, Result};
use crate::group::{direct_product, ElementId, FiniteGroup};

/// Overshoot of `[0, 1]` attributed to round-off and clamped away.
const ROUNDOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub group_order: usize,
    pub element_index: usize,
    pub class_index: usize,
    pub complexity: f64,
    pub per_irrep_terms: Vec<f64>,
}

impl ComplexityReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Clamps round-off overshoot below 0 or above `upper`.
fn clamp_to(x: f64, upper: f64) -> f64 {
    if (-ROUNDOFF..0.0).contains(&x) {
        0.0
    } else if x > upper && x <= upper + ROUNDOFF {
        upper
    } else {
        x
    }
}

/// `C(e)`, the largest value any element attains.
fn identity_value(t: &CharacterTable) -> f64 {
    t.dims().iter().sum::<usize>() as f64 / t.order() as f64
}

/// `|chi_i|^2 / d_i` for every irrep on class `cls`.
pub fn class_terms(t: &CharacterTable, cls: usize) -> Vec<f64> {
    (0..t.len())
        .map(|i| t.value(i, cls).norm_sqr() / t.dims()[i] as f64)
        .collect()
}

fn class_value(t: &CharacterTable, cls: usize) -> f64 {
    clamp_to(class_terms(t, cls).iter().sum::<f64>() / t.order() as f64, identity_value(t))
}

pub fn character_complexity(g: &FiniteGroup, t: &CharacterTable, u: ElementId) -> ComplexityReport {
    let cls = g.class_of(u);
    let terms = class_terms(t, cls);
    ComplexityReport {
        group_order: g.order(),
        element_index: u.0,
        class_index: cls,
        complexity: class_value(t, cls),
        per_irrep_terms: terms,
    }
}

/// `C(u)` alone.
pub fn complexity(g: &FiniteGroup, t: &CharacterTable, u: ElementId) -> f64 {
    class_value(t, g.class_of(u))
}

/// `C(e) = sum_i d_i / |G|`.
pub fn identity_complexity(_g: &FiniteGroup, t: &CharacterTable) -> f64 {
    identity_value(t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// `C(u1 x u2)` over `G1 x G2` against `C(u1) C(u2)`.
pub fn tensor_complexity_check(
    g1: &FiniteGroup,
    t1: &CharacterTable,
    u1: ElementId,
    g2: &FiniteGroup,
    t2: &CharacterTable,
    u2: ElementId,
    order_cap: usize,
) -> Result<TensorCheck> {
    Ok(ProductComplexity::new(g1, t1, g2, t2, order_cap)?.check(u1, u2))
}

/// A product group with its own character table, reused across many
/// element pairs.
#[derive(Debug)]
pub struct ProductComplexity<'a> {
    g1: &'a FiniteGroup,
    t1: &'a CharacterTable,
    g2: &'a FiniteGroup,
    t2: &'a CharacterTable,
    pub product: FiniteGroup,
    pub table: CharacterTable,
}

impl<'a> ProductComplexity<'a> {
    pub fn new(
        g1: &'a FiniteGroup,
        t1: &'a CharacterTable,
        g2: &'a FiniteGroup,
        t2: &'a CharacterTable,
        order_cap: usize,
    ) -> Result<Self> {
        let product = direct_product(g1, g2, order_cap)?;
        let table = character_table(&product)?;
        Ok(Self {
            g1,
            t1,
            g2,
            t2,
            product,
            table,
        })
    }

    pub fn check(&self, u1: ElementId, u2: ElementId) -> TensorCheck {
        let pair = FiniteGroup::pair_id(u1, u2, self.g2.order());
        let lhs = complexity(&self.product, &self.table, pair);
        let rhs = complexity(self.g1, self.t1, u1) * complexity(self.g2, self.t2, u2);
        TensorCheck {
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositionCheck {
    pub value: f64,
    pub holds: bool,
}

/// `C(u1 u2) <= 1`.
pub fn composition_bound_check(
    g: &FiniteGroup,
    t: &CharacterTable,
    u1: ElementId,
    u2: ElementId,
) -> CompositionCheck {
    let value = complexity(g, t, g.multiply(u1, u2));
    CompositionCheck {
        value,
        holds: value <= 1.0 + ROUNDOFF,
    }
}

/// Largest `|C(u1 u2) - C(u1) C(u2)|` over all pairs of an abelian group.
pub fn abelian_multiplicativity_check(g: &FiniteGroup, t: &CharacterTable) -> Result<f64> {
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let values: Vec<f64> = g.ids().map(|u| complexity(g, t, u)).collect();
    let mut worst: f64 = 0.0;
    for a in g.ids() {
        for b in g.ids() {
            let ab = g.multiply(a, b);
            worst = worst.max((values[ab.0] - values[a.0] * values[b.0]).abs());
        }
    }
    Ok(worst)
}

/// `r = sqrt((2^n - 1) / 2^n) * sqrt(1 - 2^-c)`, defined for all `c >= 0`.
pub fn hypersphere_radius(n: u32, c: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::DomainError("hypersphere_radius: n must be >= 1".into()));
    }
    if c.is_nan() || c < 0.0 {
        return Err(Error::DomainError(format!(
            "hypersphere_radius: complexity {c} is negative"
        )));
    }
    Ok(max_radius(n) * (1.0 - (-c).exp2()).sqrt())
}

/// `sqrt((2^n - 1) / 2^n)`, the limit of the radius as `c` grows.
pub fn max_radius(n: u32) -> f64 {
    (1.0 - (-(n as f64)).exp2()).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityProfile {
    /// One value per conjugacy class.
    pub per_class: Vec<f64>,
    pub min: f64,
    pub max: f64,
    /// Mean over elements (classes weighted by size).
    pub mean: f64,
}

pub fn complexity_profile(g: &FiniteGroup, t: &CharacterTable) -> ComplexityProfile {
    let per_class: Vec<f64> = (0..t.len()).map(|cls| class_value(t, cls)).collect();
    let min = per_class.iter().copied().fold(f64::INFINITY, f64::min);
    let max = per_class.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = per_class
        .iter()
        .zip(t.class_sizes())
        .map(|(v, &s)| v * s as f64)
        .sum::<f64>()
        / g.order() as f64;
    ComplexityProfile {
        per_class,
        min,
        max,
        mean,
    }
}
