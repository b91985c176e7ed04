use num_complex::Complex64;

use super::differential::apply_differential;
use super::first_order::{corrected_adjoint, corrected_integrator, stable_inverse};
use super::path::{kernel_extent, Direction, SampledPath};
use super::system::SystemSpec;
use crate::error::Result;

/// One elementary factor of an inverse operator.
#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    /// Causal `ρ_α *` for `Re α < 0`.
    StableInverse(Complex64),
    /// Anti-causal `ρ_α *` for `Re α > 0`.
    AntiCausalInverse(Complex64),
    /// `I_{ω0,t0}`, vanishing at `t0`.
    CorrectedIntegrator { omega0: f64, t0: f64 },
    /// `Q_M(D)` with coefficients `b_0..b_M`.
    Differential(Vec<Complex64>),
}

impl Factor {
    pub fn apply(&self, x: &SampledPath, direction: Direction) -> Result<SampledPath> {
        match self {
            Factor::StableInverse(alpha) | Factor::AntiCausalInverse(alpha) => stable_inverse(*alpha, x, direction),
            Factor::CorrectedIntegrator { omega0, t0 } => match direction {
                Direction::Forward => corrected_integrator(*omega0, *t0, x),
                Direction::Adjoint => corrected_adjoint(*omega0, *t0, x),
            },
            Factor::Differential(b) => Ok(apply_differential(b, x, direction)),
        }
    }
}

/// A product of elementary factors, stored in application order.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorChain {
    pub factors: Vec<Factor>,
    pub direction: Direction,
}

impl OperatorChain {
    pub fn identity() -> Self {
        Self { factors: Vec::new(), direction: Direction::Forward }
    }

    /// The adjoint chain: factors reversed, each one adjointed.
    pub fn adjoint(&self) -> Self {
        Self { factors: self.factors.iter().rev().cloned().collect(), direction: self.direction.flip() }
    }

    /// Extent over which the shift-invariant kernels decay below `1e-14`.
    pub fn kernel_extent(&self) -> f64 {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::StableInverse(a) | Factor::AntiCausalInverse(a) => kernel_extent(*a),
                _ => 0.0,
            })
            .sum()
    }

    /// Span of the boundary points, if any.
    pub fn boundary_span(&self) -> Option<(f64, f64)> {
        let ts: Vec<f64> = self
            .factors
            .iter()
            .filter_map(|f| match f {
                Factor::CorrectedIntegrator { t0, .. } => Some(*t0),
                _ => None,
            })
            .collect();
        if ts.is_empty() {
            return None;
        }
        Some((ts.iter().copied().fold(f64::INFINITY, f64::min), ts.iter().copied().fold(f64::NEG_INFINITY, f64::max)))
    }

    pub fn has_integrators(&self) -> bool {
        self.factors.iter().any(|f| matches!(f, Factor::CorrectedIntegrator { .. }))
    }
}

/// Factorizes `L^{-1}`: `Q_M(D)` first, then one stable inverse per off-axis
/// pole, then the corrected integrators `I_{ω_1,t_1}, …, I_{ω_{n0},t_{n0}}`
/// (so `I_{ω_{n0},t_{n0}}` is applied last). Returns the forward chain; its
/// [`OperatorChain::adjoint`] is `L^{-1*}`.
pub fn factorize(spec: &SystemSpec) -> OperatorChain {
    let mut factors = Vec::new();
    let trivial_q = spec.b.len() == 1 && spec.b[0] == Complex64::new(1.0, 0.0);
    if !trivial_q {
        factors.push(Factor::Differential(spec.b.clone()));
    }
    let off_axis = spec.poles.len() - spec.n0;
    for &alpha in &spec.poles[..off_axis] {
        factors.push(if alpha.re < 0.0 { Factor::StableInverse(alpha) } else { Factor::AntiCausalInverse(alpha) });
    }
    for (pole, &t0) in spec.poles[off_axis..].iter().zip(&spec.boundary_points) {
        factors.push(Factor::CorrectedIntegrator { omega0: pole.im, t0 });
    }
    OperatorChain { factors, direction: Direction::Forward }
}

/// Applies the chain factor by factor.
pub fn apply_chain(chain: &OperatorChain, x: &SampledPath) -> Result<SampledPath> {
    let mut y = x.clone();
    for f in &chain.factors {
        y = f.apply(&y, chain.direction)?;
    }
    Ok(y)
}

/// Applies the chain and returns the intermediate signal after every factor.
pub fn apply_chain_stages(chain: &OperatorChain, x: &SampledPath) -> Result<Vec<SampledPath>> {
    let mut stages = Vec::with_capacity(chain.factors.len());
    let mut y = x.clone();
    for f in &chain.factors {
        y = f.apply(&y, chain.direction)?;
        stages.push(y.clone());
    }
    Ok(stages)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn documented_factorizations() {
        let ar1 = factorize(&SystemSpec::first_order(c(-1.0, 0.0)).unwrap());
        assert_eq!(ar1.factors, vec![Factor::StableInverse(c(-1.0, 0.0))]);
        let brownian = factorize(&SystemSpec::from_poles(&[c(0.0, 0.0)], &[], None).unwrap());
        assert_eq!(brownian.factors, vec![Factor::CorrectedIntegrator { omega0: 0.0, t0: 0.0 }]);
        let mixed = factorize(&SystemSpec::from_poles(&[c(0.0, 0.0), c(-2.0, 0.0)], &[], None).unwrap());
        assert_eq!(
            mixed.factors,
            vec![Factor::StableInverse(c(-2.0, 0.0)), Factor::CorrectedIntegrator { omega0: 0.0, t0: 0.0 }]
        );
        let adj = mixed.adjoint();
        assert_eq!(adj.direction, Direction::Adjoint);
        assert!(matches!(adj.factors[0], Factor::CorrectedIntegrator { .. }));
    }

    #[test]
    fn integrator_order_follows_boundary_points() {
        let s = SystemSpec::from_poles(&[c(0.0, 1.0), c(0.0, -1.0)], &[], Some(vec![0.5, 1.5])).unwrap();
        let chain = factorize(&s);
        assert_eq!(
            chain.factors,
            vec![
                Factor::CorrectedIntegrator { omega0: 1.0, t0: 0.5 },
                Factor::CorrectedIntegrator { omega0: -1.0, t0: 1.5 }
            ]
        );
    }

    #[test]
    fn identity_chain_is_identity() {
        let x = SampledPath::from_fn(0.0, 0.1, 10, |t| c(t, -t)).unwrap();
        assert_eq!(apply_chain(&OperatorChain::identity(), &x).unwrap(), x);
    }

    #[test]
    fn anti_causal_pole_is_kept_stable() {
        let chain = factorize(&SystemSpec::first_order(c(0.5, 0.0)).unwrap());
        assert_eq!(chain.factors, vec![Factor::AntiCausalInverse(c(0.5, 0.0))]);
        assert!((chain.kernel_extent() - 1e14f64.ln() / 0.5).abs() < 1e-9);
    }
}
