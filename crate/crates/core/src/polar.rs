//! Polarization of Koszul elements, 1-step polarization of cycles, the
//! reduction modulo a nonzerodivisor variable, and the whisker basis of
//! top Koszul homology.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{EchelonSpace, PrimeField};
use crate::graph::SimpleGraph;
use crate::koszul::{
    homology_basis_cycles, homology_dimensions, term_multidegree, CoefficientModule, DepthOptions,
    IndexSet, KoszulElement, StrandComplex,
};
use crate::monomial::{Monomial, MonomialIdeal, VariableSpace};

/// Source and target data of a polarization: bounds `c`, the target space
/// ordered `x_{11}, .., x_{1c_1}, x_{21}, ..`, and the slot map
/// `map[i][t] = index of x_{i,t+1}`.
#[derive(Debug, Clone)]
pub struct PolarizationContext {
    source: Arc<VariableSpace>,
    target: Arc<VariableSpace>,
    bounds: Vec<u16>,
    map: Vec<Vec<usize>>,
    ideal: Option<MonomialIdeal>,
    polarized: Option<MonomialIdeal>,
}

impl PolarizationContext {
    /// Context with `c_i = max deg_{x_i}` over the generators of `ideal`.
    pub fn new(ideal: &MonomialIdeal) -> Self {
        let (polarized, target) = ideal.polarize();
        let map = target
            .polarization_map()
            .expect("polarized space carries its map")
            .to_vec();
        Self {
            source: ideal.space_arc().clone(),
            target: Arc::new(target),
            bounds: ideal.max_degrees(),
            map,
            ideal: Some(ideal.clone()),
            polarized: Some(polarized),
        }
    }

    /// Context for explicit bounds, with no ideal attached.
    pub fn from_bounds(space: impl Into<Arc<VariableSpace>>, bounds: &[u16]) -> Result<Self> {
        let space = space.into();
        if bounds.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: bounds.len(),
            });
        }
        let top = MonomialIdeal::minimalize(space, [Monomial::from_exponents(bounds)])?;
        let mut ctx = Self::new(&top);
        ctx.ideal = None;
        ctx.polarized = None;
        Ok(ctx)
    }

    pub fn source(&self) -> &Arc<VariableSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VariableSpace> {
        &self.target
    }

    pub fn bounds(&self) -> &[u16] {
        &self.bounds
    }

    pub fn slot(&self, i: usize, t: usize) -> Option<usize> {
        self.map.get(i).and_then(|s| s.get(t)).copied()
    }

    pub fn ideal(&self) -> Option<&MonomialIdeal> {
        self.ideal.as_ref()
    }

    pub fn polarized_ideal(&self) -> Option<&MonomialIdeal> {
        self.polarized.as_ref()
    }

    pub fn polarize_monomial(&self, u: &Monomial) -> Result<Monomial> {
        self.check_bounds(u)?;
        u.polarize(&self.map, self.target.len())
    }

    pub fn polarize_ideal(&self, ideal: &MonomialIdeal) -> Result<MonomialIdeal> {
        if ideal.space() != &*self.source {
            return Err(Error::DimensionMismatch {
                expected: self.source.len(),
                found: ideal.nvars(),
            });
        }
        let gens = ideal
            .generators()
            .iter()
            .map(|g| self.polarize_monomial(g))
            .collect::<Result<Vec<_>>>()?;
        MonomialIdeal::minimalize(self.target.clone(), gens)
    }

    pub fn polarize_module(&self, module: &CoefficientModule) -> Result<CoefficientModule> {
        Ok(match module {
            CoefficientModule::Free => CoefficientModule::Free,
            CoefficientModule::Ideal(i) => {
                CoefficientModule::Ideal(Arc::new(self.polarize_ideal(i)?))
            }
            CoefficientModule::Quotient(i) => {
                CoefficientModule::Quotient(Arc::new(self.polarize_ideal(i)?))
            }
        })
    }

    fn check_bounds(&self, d: &Monomial) -> Result<()> {
        for (i, (&a, &c)) in d.exponents().iter().zip(&self.bounds).enumerate() {
            if a > c {
                return Err(Error::Precondition(format!(
                    "degree {a} in {} exceeds the polarization bound {c}",
                    self.source.label(i)
                )));
            }
        }
        Ok(())
    }
}

/// `f^℘ = Σ λ (u e_J)^℘` with
/// `(u e_{j_1} ∧ .. ∧ e_{j_t})^℘ = u^℘ e_{j_1, a_{j_1}+1} ∧ .. ∧ e_{j_t, a_{j_t}+1}`,
/// `a = deg u`. Every term needs `deg(u e_J) <= c`.
pub fn polarize_element(f: &KoszulElement, ctx: &PolarizationContext) -> Result<KoszulElement> {
    if f.space() != &**ctx.source() {
        return Err(Error::DimensionMismatch {
            expected: ctx.source().len(),
            found: f.nvars(),
        });
    }
    let module = ctx.polarize_module(f.module())?;
    let mut out = KoszulElement::zero(ctx.target().clone(), module, f.field())?;
    for (u, set, c) in f.terms() {
        ctx.check_bounds(&term_multidegree(u, set))?;
        let pu = u.polarize(&ctx.map, ctx.target.len())?;
        // slots increase with the source index, so the wedge order is kept
        let target_set = IndexSet::from_indices(
            &set.iter()
                .map(|j| ctx.map[j][u.degree_in(j) as usize])
                .collect::<Vec<_>>(),
        );
        out.add_term(c, pu, target_set)?;
    }
    Ok(out)
}

/// Result of a 1-step polarization of a cycle: the element over the
/// extended space and the index of the fresh variable `y` (whose Koszul
/// generator plays the role of `f`).
#[derive(Debug, Clone)]
pub struct OneStepCycle {
    pub element: KoszulElement,
    pub ideal: Option<MonomialIdeal>,
    pub fresh: usize,
}

/// 1-step polarization of a multi-homogeneous cycle with respect to `x_i`.
///
/// With `d = deg_{x_i} z` and `y` the fresh variable:
/// * `d <= 1`: the terms are unchanged;
/// * `d = 2`: `u e_J ↦ (u y / x_i) e_J` when `i ∉ J`, and `e_i ↦ f` when `i ∈ J`;
/// * `d >= 3`: every coefficient is multiplied by `y / x_i`.
///
/// Coefficients must be free or in an ideal; the output lives over the
/// 1-step polarized ideal.
pub fn one_step_polarize_cycle(z: &KoszulElement, i: usize) -> Result<OneStepCycle> {
    if i >= z.nvars() {
        return Err(Error::InvalidArgument(format!(
            "variable index {i} out of range"
        )));
    }
    if !z.is_cycle() {
        return Err(Error::Precondition("element is not a cycle".into()));
    }
    let (ideal, space, module) = match z.module() {
        CoefficientModule::Ideal(ideal) => {
            let (p, space) = ideal.one_step_polarize(i)?;
            let m = CoefficientModule::Ideal(Arc::new(p.clone()));
            (Some(p), space, m)
        }
        CoefficientModule::Free => {
            let label = format!("{}_p", z.space().label(i));
            let (space, _) = z.space().with_fresh_variable(&label);
            (None, space, CoefficientModule::Free)
        }
        CoefficientModule::Quotient(_) => {
            return Err(Error::Precondition(
                "1-step cycle polarization needs free or ideal coefficients".into(),
            ))
        }
    };
    let d = match z.multidegree() {
        Some(a) => a.degree_in(i),
        None if z.is_zero() => 0,
        None => {
            return Err(Error::Precondition(
                "element is not multi-homogeneous".into(),
            ))
        }
    };
    let y = space.len() - 1;
    let mut out = KoszulElement::zero(Arc::new(space), module, z.field())?;
    for (u, set, c) in z.terms() {
        let u = u.with_extra_variables(1);
        let (u, set) = match d {
            0 | 1 => (u, set),
            2 if set.contains(i) => (u, set.remove(i).insert(y)),
            _ => (shift(&u, i, y)?, set),
        };
        out.add_term(c, u, set)?;
    }
    Ok(OneStepCycle {
        element: out,
        ideal,
        fresh: y,
    })
}

fn shift(u: &Monomial, i: usize, y: usize) -> Result<Monomial> {
    u.div_var(i).map(|v| v.mul_var(y)).ok_or_else(|| {
        Error::Internal("coefficient not divisible by the polarized variable".into())
    })
}

/// Reduction modulo a variable `x_v` that is a nonzerodivisor on the
/// coefficients: write `z = e_v ∧ z_0 + z_1` and return `z_1` with
/// coefficients reduced modulo `x_v`, in the space without `x_v`.
///
/// The nonzerodivisor hypothesis is checked conservatively: `x_v` must not
/// occur in any generator.
pub fn comparison_reduce(z: &KoszulElement, v: usize) -> Result<KoszulElement> {
    if v >= z.nvars() {
        return Err(Error::InvalidArgument(format!(
            "variable index {v} out of range"
        )));
    }
    if let Some(ideal) = z.module().ideal() {
        if ideal.generators().iter().any(|g| g.degree_in(v) > 0) {
            return Err(Error::Precondition(format!(
                "{} occurs in a generator and may be a zerodivisor",
                z.space().label(v)
            )));
        }
    }
    if !z.is_cycle() {
        return Err(Error::Precondition("element is not a cycle".into()));
    }
    let labels: Vec<String> = z
        .space()
        .labels()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != v)
        .map(|(_, l)| l.clone())
        .collect();
    let space = Arc::new(VariableSpace::new(labels)?);
    let drop_v = |ideal: &MonomialIdeal| -> Result<Arc<MonomialIdeal>> {
        let gens = ideal.generators().iter().map(|g| g.remove_variable(v));
        Ok(Arc::new(MonomialIdeal::minimalize(space.clone(), gens)?))
    };
    let module = match z.module() {
        CoefficientModule::Free => CoefficientModule::Free,
        CoefficientModule::Ideal(i) => CoefficientModule::Ideal(drop_v(i)?),
        CoefficientModule::Quotient(i) => CoefficientModule::Quotient(drop_v(i)?),
    };
    let mut out = KoszulElement::zero(space.clone(), module, z.field())?;
    for (u, set, c) in z.terms() {
        if set.contains(v) || u.degree_in(v) > 0 {
            continue;
        }
        let lowered = IndexSet::from_indices(
            &set.iter()
                .map(|j| if j > v { j - 1 } else { j })
                .collect::<Vec<_>>(),
        );
        out.add_term(c, u.remove_variable(v), lowered)?;
    }
    Ok(out)
}

/// The cycles `x_S e_{V∖S} ∧ f_S` over `S*/I(G*)`, one per maximal
/// independent set `S` (in the order of `maximal_independent_sets`), with
/// `f_i = e_{n+i}` in the whisker space.
pub fn whisker_hn_basis(g: &SimpleGraph, field: PrimeField) -> Result<Vec<KoszulElement>> {
    let n = g.n();
    let ideal = g.whisker_ideal();
    let space = ideal.space_arc().clone();
    let module = CoefficientModule::Quotient(Arc::new(ideal));
    g.maximal_independent_sets()
        .into_iter()
        .map(|s| {
            let u = Monomial::product_of(2 * n, s.iter().copied());
            let mut idx: Vec<usize> = (0..n).filter(|v| !s.contains(v)).collect();
            idx.extend(s.iter().map(|&v| n + v));
            KoszulElement::from_terms(
                space.clone(),
                module.clone(),
                field,
                [(1, u, IndexSet::from_indices(&idx))],
            )
        })
        .collect()
}

/// Outcome of checking that polarization carries a homology basis of
/// `H_i(x; I)` to a basis of `H_i(x^℘; I^℘)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolarizedBasisReport {
    pub ideal: String,
    pub i: usize,
    pub r: usize,
    /// Nonzero `dim H_i(x^℘; I^℘)_a`, keyed by the degree in text form.
    pub dims_by_degree: Vec<(String, usize)>,
    pub pass: bool,
    pub witness_failures: Vec<String>,
}

pub fn verify_polarized_basis(
    ideal: &MonomialIdeal,
    i: usize,
    field: &PrimeField,
    opts: &DepthOptions,
) -> Result<PolarizedBasisReport> {
    let ctx = PolarizationContext::new(ideal);
    let source_module = CoefficientModule::Ideal(Arc::new(ideal.clone()));
    let cycles = homology_basis_cycles(ideal.space_arc(), &source_module, i, field, opts)?;
    let r = cycles.len();
    let polarized_ideal = ctx.polarized_ideal().expect("context built from an ideal");
    let target_module = CoefficientModule::Ideal(Arc::new(polarized_ideal.clone()));

    let mut failures = Vec::new();
    let mut by_degree: BTreeMap<Monomial, Vec<KoszulElement>> = BTreeMap::new();
    for (t, z) in cycles.iter().enumerate() {
        let zp = polarize_element(z, &ctx)?;
        if !zp.is_cycle() {
            failures.push(format!("cycle {t} polarizes to a non-cycle"));
            continue;
        }
        match zp.multidegree() {
            Some(a) => by_degree.entry(a).or_default().push(zp),
            None => failures.push(format!("cycle {t} polarizes to a non-homogeneous element")),
        }
    }

    let dims = homology_dimensions(&target_module, ctx.target().len(), field, opts)?;
    let dims_by_degree: Vec<(String, usize)> = dims
        .iter()
        .filter_map(|(a, d)| {
            let di = d.get(i).copied().unwrap_or(0);
            (di > 0).then(|| (a.to_text(ctx.target()), di))
        })
        .collect();
    let total: usize = dims_by_degree.iter().map(|(_, d)| d).sum();
    if total != r {
        failures.push(format!(
            "dim H_{i} after polarization is {total}, expected {r}"
        ));
    }

    for (a, group) in &by_degree {
        let strand = StrandComplex::new(&target_module, a);
        let mut span = EchelonSpace::new(strand.dim(i), *field);
        if i < strand.top() {
            let d = strand.boundary_matrix(i + 1, field);
            for c in 0..d.cols() {
                span.insert(&d.column(c));
            }
        }
        for zp in group {
            let independent = strand.coordinates(zp, i).is_some_and(|v| span.insert(&v));
            if !independent {
                failures.push(format!(
                    "classes at degree {} are dependent modulo boundaries",
                    a.to_text(ctx.target())
                ));
                break;
            }
        }
    }

    Ok(PolarizedBasisReport {
        ideal: ideal.to_string(),
        i,
        r,
        dims_by_degree,
        pass: failures.is_empty(),
        witness_failures: failures,
    })
}
