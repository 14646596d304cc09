use std::collections::HashMap;

use crate::field::{Matrix, PrimeField};
use crate::graph::bits;
use crate::monomial::Monomial;

use super::{CoefficientModule, IndexSet, KoszulElement};

/// The multidegree-`a` strand of `K(x; M)`: in homological degree `i` the
/// basis is every `u e_J` with `|J| = i`, `J ⊆ supp(a)`, `u = x^a / x_J`,
/// and `u` admissible for the coefficient module. Bases are sorted
/// lexicographically on `(u, J)`.
#[derive(Debug, Clone)]
pub struct StrandComplex {
    degree: Monomial,
    bases: Vec<Vec<IndexSet>>,
    position: HashMap<u64, usize>,
}

impl StrandComplex {
    pub fn new(module: &CoefficientModule, degree: &Monomial) -> Self {
        Self::build(module, degree, 0, true)
    }

    /// Strand with chain groups below `floor - 1` left empty and bases
    /// unsorted; enough for homology in degrees `>= floor`.
    pub(crate) fn truncated(module: &CoefficientModule, degree: &Monomial, floor: usize) -> Self {
        Self::build(module, degree, floor.saturating_sub(1), false)
    }

    fn build(module: &CoefficientModule, degree: &Monomial, min_size: usize, sorted: bool) -> Self {
        let supp = degree.support_mask();
        // a generator g | a avoids x^a / x_J iff J misses tight(g) = {j : g_j = a_j}
        let tights: Option<Vec<u64>> = module.ideal().map(|ideal| {
            let mut t: Vec<u64> = ideal
                .generators()
                .iter()
                .filter(|g| g.divides(degree))
                .map(|g| {
                    g.exponents()
                        .iter()
                        .zip(degree.exponents())
                        .enumerate()
                        .filter(|(_, (gj, aj))| gj == aj && **aj > 0)
                        .fold(0u64, |m, (j, _)| m | 1 << j)
                })
                .collect();
            t.sort_by_key(|m| m.count_ones());
            let mut minimal: Vec<u64> = Vec::new();
            for m in t {
                if !minimal.iter().any(|k| k & m == *k) {
                    minimal.push(m);
                }
            }
            minimal
        });
        let in_ideal = |j: u64| {
            tights
                .as_ref()
                .is_some_and(|t| t.iter().any(|&m| m & j == 0))
        };
        let keep = |j: u64| match module {
            CoefficientModule::Free => true,
            CoefficientModule::Ideal(_) => in_ideal(j),
            CoefficientModule::Quotient(_) => !in_ideal(j),
        };

        let top = supp.count_ones() as usize;
        let mut bases: Vec<Vec<IndexSet>> = vec![Vec::new(); top + 1];
        // enumerate subsets of supp
        let mut sub = 0u64;
        loop {
            if sub.count_ones() as usize >= min_size && keep(sub) {
                bases[sub.count_ones() as usize].push(IndexSet::from_mask(sub));
            }
            if sub == supp {
                break;
            }
            sub = (sub.wrapping_sub(supp)) & supp;
        }
        for b in bases.iter_mut().filter(|_| sorted) {
            b.sort_by_cached_key(|x| (strand_coefficient(degree, *x), *x));
        }
        let mut position = HashMap::new();
        for b in &bases {
            for (k, j) in b.iter().enumerate() {
                position.insert(j.mask(), k);
            }
        }
        Self {
            degree: degree.clone(),
            bases,
            position,
        }
    }

    pub fn degree(&self) -> &Monomial {
        &self.degree
    }

    /// Largest homological degree with a possibly nonzero chain group.
    pub fn top(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn dim(&self, i: usize) -> usize {
        self.bases.get(i).map_or(0, Vec::len)
    }

    /// Basis of the chain group in degree `i` as `(u, J)` pairs.
    pub fn basis(&self, i: usize) -> Vec<(Monomial, IndexSet)> {
        self.bases
            .get(i)
            .map(|b| {
                b.iter()
                    .map(|&j| (strand_coefficient(&self.degree, j), j))
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn index_sets(&self, i: usize) -> &[IndexSet] {
        self.bases.get(i).map_or(&[], Vec::as_slice)
    }

    /// Matrix of `∂_i : C_i → C_{i-1}`; columns index `C_i`.
    pub fn boundary_matrix(&self, i: usize, field: &PrimeField) -> Matrix {
        let cols = self.dim(i);
        let rows = if i == 0 { 0 } else { self.dim(i - 1) };
        let mut m = Matrix::zeros(rows, cols);
        if i == 0 {
            return m;
        }
        for (c, set) in self.bases[i].iter().enumerate() {
            for (pos, j) in set.iter().enumerate() {
                let face = set.remove(j).mask();
                // faces missing from the basis vanish in a quotient
                if let Some(&r) = self.position.get(&face) {
                    if self.bases[i - 1][r].mask() == face {
                        let v = if pos % 2 == 0 { 1 } else { field.neg(1) };
                        m.set(r, c, v);
                    }
                }
            }
        }
        m
    }

    /// Homology dimensions `dim H_i` for `i = 0..=top`.
    pub fn homology_dims(&self, field: &PrimeField) -> Vec<usize> {
        let top = self.top();
        let ranks: Vec<usize> = (0..=top + 1)
            .map(|i| {
                if i == 0 || i > top {
                    0
                } else {
                    self.boundary_matrix(i, field).rank(field)
                }
            })
            .collect();
        (0..=top)
            .map(|i| self.dim(i) - ranks[i] - ranks[i + 1])
            .collect()
    }

    /// Largest `i >= floor` with `H_i != 0`, computed from the top down so
    /// that ranks below `floor` are never formed.
    pub fn top_nonzero_homology(&self, floor: usize, field: &PrimeField) -> Option<usize> {
        let top = self.top();
        if top < floor {
            return None;
        }
        let mut r_out = 0;
        for i in (floor..=top).rev() {
            let r_in = if i == 0 {
                0
            } else {
                self.boundary_matrix(i, field).rank(field)
            };
            if self.dim(i) > r_in + r_out {
                return Some(i);
            }
            r_out = r_in;
        }
        None
    }

    pub fn homology_dim(&self, i: usize, field: &PrimeField) -> usize {
        if i > self.top() {
            return 0;
        }
        let r_in = if i == 0 {
            0
        } else {
            self.boundary_matrix(i, field).rank(field)
        };
        let r_out = if i + 1 > self.top() {
            0
        } else {
            self.boundary_matrix(i + 1, field).rank(field)
        };
        self.dim(i) - r_in - r_out
    }

    /// Coordinates of a homogeneous element of this strand in the basis of
    /// `C_i`. `None` if some term is not a basis element here.
    pub fn coordinates(&self, z: &KoszulElement, i: usize) -> Option<Vec<u64>> {
        let mut v = vec![0; self.dim(i)];
        for (u, j, c) in z.terms() {
            if j.len() != i || &strand_coefficient(&self.degree, j) != u {
                return None;
            }
            let &k = self.position.get(&j.mask())?;
            if self.bases[i][k] != j {
                return None;
            }
            v[k] = c;
        }
        Some(v)
    }

    /// The element with the given coordinates in `C_i`.
    pub fn element(&self, template: &KoszulElement, i: usize, coords: &[u64]) -> KoszulElement {
        let mut z = KoszulElement::zero(
            template.space_arc().clone(),
            template.module().clone(),
            template.field(),
        )
        .expect("template is consistent");
        for (&set, &c) in self.bases[i].iter().zip(coords) {
            if c != 0 {
                z.add_term(c, strand_coefficient(&self.degree, set), set)
                    .expect("strand basis elements are admissible");
            }
        }
        z
    }

    pub fn support(&self) -> impl Iterator<Item = usize> {
        bits(self.degree.support_mask())
    }
}

/// `x^a / x_J`.
fn strand_coefficient(degree: &Monomial, set: IndexSet) -> Monomial {
    let mut u = degree.clone();
    for j in set.iter() {
        u = u.div_var(j).expect("J inside the support of a");
    }
    u
}
