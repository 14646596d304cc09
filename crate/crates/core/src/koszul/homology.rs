use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::field::{EchelonSpace, PrimeField};
use crate::monomial::{Monomial, MonomialIdeal, VariableSpace, DEFAULT_LATTICE_CAP};

use super::{CoefficientModule, KoszulElement, StrandComplex};

/// Largest exponent box walked before giving up.
pub const MAX_BOX_SIZE: u64 = 50_000_000;

/// Which candidate multidegrees to scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Enumeration {
    /// The lcm lattice, falling back to the exponent box past the cap.
    Auto,
    /// The lcm lattice only; exceeding the cap is an error.
    Lattice,
    /// Every degree in the per-variable exponent-value box.
    ExponentBox,
}

#[derive(Debug, Clone, Copy)]
pub struct DepthOptions {
    pub cap: usize,
    pub enumeration: Enumeration,
    pub exec: Execution,
}

impl Default for DepthOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_LATTICE_CAP,
            enumeration: Enumeration::Auto,
            exec: Execution::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthReport {
    pub nvars: usize,
    pub depth: usize,
    pub projective_dimension: usize,
    /// Lexicographically first degree `a` with `H_pd(x; S/I)_a != 0`.
    pub witness: Monomial,
    pub candidates: u64,
    pub enumeration: Enumeration,
}

fn template_space(module: &CoefficientModule, space: &Arc<VariableSpace>) -> Result<()> {
    if let Some(i) = module.ideal() {
        if i.space() != &**space {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: i.nvars(),
            });
        }
    }
    Ok(())
}

/// Runs `f` on the strand at every candidate degree of `module`, keeping
/// the `Some` results in candidate order.
fn scan<R, F>(
    module: &CoefficientModule,
    nvars: usize,
    opts: &DepthOptions,
    f: F,
) -> Result<(Vec<R>, u64, Enumeration)>
where
    R: Send,
    F: Fn(&Monomial) -> Option<R> + Sync + Send,
{
    let unit_ideal;
    let ideal: &MonomialIdeal = match module.ideal() {
        Some(i) => i,
        None => {
            // free coefficients: homology only in degree 0
            unit_ideal = MonomialIdeal::zero(VariableSpace::indexed("x", nvars));
            &unit_ideal
        }
    };
    let lattice = match opts.enumeration {
        Enumeration::ExponentBox => None,
        Enumeration::Lattice => Some(ideal.lcm_lattice(opts.cap)?),
        Enumeration::Auto => match ideal.lcm_lattice(opts.cap) {
            Ok(l) => Some(l),
            Err(Error::Capacity { .. }) => None,
            Err(e) => return Err(e),
        },
    };
    match lattice {
        Some(degrees) => {
            let n = degrees.len() as u64;
            let out = exec::map(opts.exec, &degrees, |a| f(a));
            Ok((out.into_iter().flatten().collect(), n, Enumeration::Lattice))
        }
        None => {
            let bx = ideal.exponent_box();
            let n = bx.len();
            if n > MAX_BOX_SIZE {
                return Err(Error::Capacity { cap: opts.cap });
            }
            let out = exec::filter_map_range(opts.exec, 0..n, |idx| f(&bx.get(idx)));
            Ok((out, n, Enumeration::ExponentBox))
        }
    }
}

/// `dim_K H_i(x; M)_a`.
pub fn strand_homology_rank(
    module: &CoefficientModule,
    degree: &Monomial,
    i: usize,
    field: &PrimeField,
) -> usize {
    StrandComplex::new(module, degree).homology_dim(i, field)
}

/// All degrees with nonzero homology, each with its vector of dimensions
/// `dim H_i(x; M)_a`, sorted by degree.
pub fn homology_dimensions(
    module: &CoefficientModule,
    nvars: usize,
    field: &PrimeField,
    opts: &DepthOptions,
) -> Result<Vec<(Monomial, Vec<usize>)>> {
    let (mut out, _, _) = scan(module, nvars, opts, |a| {
        let strand = StrandComplex::new(module, a);
        let dims = strand.homology_dims(field);
        dims.iter()
            .any(|&d| d > 0)
            .then(|| (strand.degree().clone(), dims))
    })?;
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// `depth(S/I) = N - max { i : H_i(x; S/I) != 0 }`.
pub fn depth(ideal: &MonomialIdeal, field: &PrimeField) -> Result<DepthReport> {
    depth_with(ideal, field, &DepthOptions::default())
}

pub fn depth_with(
    ideal: &MonomialIdeal,
    field: &PrimeField,
    opts: &DepthOptions,
) -> Result<DepthReport> {
    if ideal.is_unit() {
        return Err(Error::InvalidArgument(
            "depth of S/I needs a proper ideal".into(),
        ));
    }
    let nvars = ideal.nvars();
    let module = CoefficientModule::Quotient(Arc::new(ideal.clone()));
    // Strands whose support is smaller than the best degree found so far
    // cannot raise the maximum, so they are skipped. A degree carrying the
    // final maximum is never skipped, which keeps the witness deterministic.
    let best = AtomicUsize::new(0);
    let (found, candidates, enumeration) = scan(&module, nvars, opts, |a| {
        let floor = best.load(Ordering::Relaxed);
        if (a.support_mask().count_ones() as usize) < floor {
            return None;
        }
        let strand = StrandComplex::truncated(&module, a, floor);
        let top = strand.top_nonzero_homology(floor, field)?;
        best.fetch_max(top, Ordering::Relaxed);
        Some((top, a.clone()))
    })?;
    let pd = found
        .iter()
        .map(|(i, _)| *i)
        .max()
        .ok_or_else(|| Error::Internal("no homology found for a proper ideal".into()))?;
    let witness = found
        .into_iter()
        .filter(|(i, _)| *i == pd)
        .map(|(_, a)| a)
        .min()
        .expect("maximum is attained");
    Ok(DepthReport {
        nvars,
        depth: nvars - pd,
        projective_dimension: pd,
        witness,
        candidates,
        enumeration,
    })
}

/// Whether a multi-homogeneous cycle has a nonzero class, i.e. is not in
/// the image of `∂` within its own strand.
pub fn homology_class_nonzero(z: &KoszulElement) -> Result<bool> {
    if z.is_zero() {
        return Ok(false);
    }
    let i = z
        .homological_degree()
        .ok_or_else(|| Error::Precondition("element is not homogeneous".into()))?;
    let a = z
        .multidegree()
        .ok_or_else(|| Error::Precondition("element is not multi-homogeneous".into()))?;
    if !z.is_cycle() {
        return Err(Error::Precondition("element is not a cycle".into()));
    }
    let field = z.field();
    let strand = StrandComplex::new(z.module(), &a);
    let v = strand
        .coordinates(z, i)
        .ok_or_else(|| Error::Internal("element does not fit its own strand".into()))?;
    if i + 1 > strand.top() {
        return Ok(true);
    }
    let d = strand.boundary_matrix(i + 1, &field);
    let mut image = EchelonSpace::new(d.rows(), field);
    for c in 0..d.cols() {
        image.insert(&d.column(c));
    }
    Ok(!image.contains(&v))
}

/// Cycles whose classes form a basis of `H_i(x; M)`, grouped by degree
/// (degrees in lexicographic order). In each strand the kernel basis of
/// `∂_i` is reduced against the boundaries and the representatives chosen
/// so far; the surviving reduced vectors are the representatives.
pub fn homology_basis_cycles(
    space: &Arc<VariableSpace>,
    module: &CoefficientModule,
    i: usize,
    field: &PrimeField,
    opts: &DepthOptions,
) -> Result<Vec<KoszulElement>> {
    template_space(module, space)?;
    let template = KoszulElement::zero(space.clone(), module.clone(), *field)?;
    let (groups, _, _) = scan(module, space.len(), opts, |a| {
        if (a.support_mask().count_ones() as usize) < i {
            return None;
        }
        let strand = StrandComplex::new(module, a);
        if strand.dim(i) == 0 {
            return None;
        }
        let cycles = strand.boundary_matrix(i, field).kernel(field);
        if cycles.is_empty() {
            return None;
        }
        let mut span = EchelonSpace::new(strand.dim(i), *field);
        if i < strand.top() {
            let d = strand.boundary_matrix(i + 1, field);
            for c in 0..d.cols() {
                span.insert(&d.column(c));
            }
        }
        let mut reps = Vec::new();
        for z in cycles {
            let r = span.reduce(&z);
            if r.iter().any(|&c| c != 0) {
                span.insert(&r);
                reps.push(strand.element(&template, i, &r));
            }
        }
        (!reps.is_empty()).then_some(reps)
    })?;
    Ok(groups.into_iter().flatten().collect())
}
