use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::monomial::{Monomial, MonomialIdeal, VariableSpace};

use super::{CoefficientModule, IndexSet};

/// `deg(u e_J)`: the exponent vector of `u` plus the indicator of `J`.
pub fn term_multidegree(u: &Monomial, set: IndexSet) -> Monomial {
    let mut d = u.clone();
    for j in set.iter() {
        d = d.mul_var(j);
    }
    d
}

/// A finite sum `Σ λ u e_J` in the Koszul complex of the full variable
/// sequence of `space`, with coefficients `u` taken in a free module, an
/// ideal, or a quotient ring. Scalars live in GF(p).
///
/// Quotient coefficients are kept reduced: terms with `u ∈ I` are dropped on
/// insertion. Ideal coefficients must lie in `I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoszulElement {
    space: Arc<VariableSpace>,
    module: CoefficientModule,
    field: PrimeField,
    terms: BTreeMap<(Monomial, IndexSet), u64>,
}

#[allow(clippy::len_without_is_empty)]
impl KoszulElement {
    pub fn zero(
        space: impl Into<Arc<VariableSpace>>,
        module: CoefficientModule,
        field: PrimeField,
    ) -> Result<Self> {
        let space = space.into();
        if let Some(i) = module.ideal() {
            if i.space() != &*space {
                return Err(Error::DimensionMismatch {
                    expected: space.len(),
                    found: i.nvars(),
                });
            }
        }
        Ok(Self {
            space,
            module,
            field,
            terms: BTreeMap::new(),
        })
    }

    /// Builds an element from `(coefficient, u, J)` triples.
    pub fn from_terms(
        space: impl Into<Arc<VariableSpace>>,
        module: CoefficientModule,
        field: PrimeField,
        terms: impl IntoIterator<Item = (i64, Monomial, IndexSet)>,
    ) -> Result<Self> {
        let mut z = Self::zero(space, module, field)?;
        for (c, u, j) in terms {
            let c = field.from_i64(c);
            z.add_term(c, u, j)?;
        }
        Ok(z)
    }

    pub fn space(&self) -> &VariableSpace {
        &self.space
    }

    pub fn space_arc(&self) -> &Arc<VariableSpace> {
        &self.space
    }

    pub fn nvars(&self) -> usize {
        self.space.len()
    }

    pub fn module(&self) -> &CoefficientModule {
        &self.module
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, IndexSet, u64)> {
        self.terms.iter().map(|((u, j), &c)| (u, *j, c))
    }

    pub fn coefficient(&self, u: &Monomial, set: IndexSet) -> u64 {
        self.terms.get(&(u.clone(), set)).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c · u e_J`. Fails if `u` is outside an ideal coefficient module
    /// or an index is out of range; silently drops terms that vanish in a
    /// quotient.
    pub fn add_term(&mut self, c: u64, u: Monomial, set: IndexSet) -> Result<()> {
        if u.nvars() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: u.nvars(),
            });
        }
        if set.max_index().is_some_and(|m| m >= self.nvars()) {
            return Err(Error::InvalidArgument(format!(
                "basis index {} out of range",
                set.max_index().unwrap() + 1
            )));
        }
        let c = c % self.field.characteristic();
        if c == 0 {
            return Ok(());
        }
        match &self.module {
            CoefficientModule::Free => {}
            CoefficientModule::Ideal(i) => {
                if !i.contains(&u) {
                    return Err(Error::Precondition(format!(
                        "coefficient {} is not in the ideal {}",
                        u.to_text(&self.space),
                        i
                    )));
                }
            }
            CoefficientModule::Quotient(i) => {
                if i.contains(&u) {
                    return Ok(());
                }
            }
        }
        let f = self.field;
        let key = (u, set);
        let v = f.add(self.terms.get(&key).copied().unwrap_or(0), c);
        if v == 0 {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
        Ok(())
    }

    /// Homological degree, if all terms share one. `None` for zero or mixed
    /// elements.
    pub fn homological_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|(_, j)| j.len());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// The common multidegree of all terms, if the element is
    /// multi-homogeneous and nonzero.
    pub fn multidegree(&self) -> Option<Monomial> {
        let mut it = self.terms.keys().map(|(u, j)| term_multidegree(u, *j));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Maximum of `deg_{x_i}` over the terms.
    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms
            .keys()
            .map(|(u, j)| u.degree_in(i) + j.contains(i) as u16)
            .max()
            .unwrap_or(0)
    }

    fn empty_like(&self) -> Self {
        Self {
            space: self.space.clone(),
            module: self.module.clone(),
            field: self.field,
            terms: BTreeMap::new(),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: other.nvars(),
            });
        }
        if self.field != other.field {
            return Err(Error::InvalidArgument(
                "elements over different fields".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.module != other.module {
            return Err(Error::InvalidArgument(
                "cannot add elements with different coefficient modules".into(),
            ));
        }
        let mut out = self.clone();
        for (u, j, c) in other.terms() {
            out.add_term(c, u.clone(), j)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: u64) -> Self {
        let mut out = self.empty_like();
        let c = c % self.field.characteristic();
        if c != 0 {
            for (k, &v) in &self.terms {
                out.terms.insert(k.clone(), self.field.mul(v, c));
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.characteristic() - 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Reinterprets the element with different coefficients, re-validating
    /// ideal membership (and dropping terms that vanish in a quotient).
    pub fn with_module(&self, module: CoefficientModule) -> Result<Self> {
        let mut out = Self::zero(self.space.clone(), module, self.field)?;
        for (u, j, c) in self.terms() {
            out.add_term(c, u.clone(), j)?;
        }
        Ok(out)
    }

    /// The Koszul differential with `∂e_j = x_j`:
    /// `∂(u e_{j_1} ∧ .. ∧ e_{j_i}) = Σ_t (-1)^(t+1) x_{j_t} u e_{J \ j_t}`.
    pub fn boundary(&self) -> Self {
        let mut out = self.empty_like();
        let f = self.field;
        for ((u, set), &c) in &self.terms {
            for (pos, j) in set.iter().enumerate() {
                let coeff = if pos % 2 == 0 { c } else { f.neg(c) };
                out.add_term(coeff, u.mul_var(j), set.remove(j))
                    .expect("boundary stays in the coefficient module");
            }
        }
        out
    }

    pub fn is_cycle(&self) -> bool {
        self.boundary().is_zero()
    }

    /// The exterior product `self ∧ other`, with coefficients multiplied and
    /// placed in `target` (for ideals, `I^j · I^k ⊆ I^(j+k)`).
    pub fn wedge(&self, other: &Self, target: CoefficientModule) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.space.clone(), target, self.field)?;
        let f = self.field;
        // accumulate over the free module first, then validate once
        let mut acc: BTreeMap<(Monomial, IndexSet), u64> = BTreeMap::new();
        for ((u, a), &c) in &self.terms {
            for ((v, b), &d) in &other.terms {
                let Some((sign, set)) = a.wedge(*b) else {
                    continue;
                };
                let mut coeff = f.mul(c, d);
                if sign < 0 {
                    coeff = f.neg(coeff);
                }
                let e = acc.entry((u.mul(v), set)).or_insert(0);
                *e = f.add(*e, coeff);
            }
        }
        for ((u, set), c) in acc {
            if c != 0 {
                out.add_term(c, u, set)?;
            }
        }
        Ok(out)
    }

    /// One term per line: `coeff * monomial * e[J]`, J 1-based.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for ((u, set), &c) in &self.terms {
            let idx: Vec<String> = set.iter().map(|j| (j + 1).to_string()).collect();
            let _ = writeln!(
                s,
                "{} * {} * e[{}]",
                self.field.to_signed(c),
                u.to_text(&self.space),
                idx.join(",")
            );
        }
        s
    }

    pub fn parse(
        text: &str,
        space: impl Into<Arc<VariableSpace>>,
        module: CoefficientModule,
        field: PrimeField,
    ) -> Result<Self> {
        let space = space.into();
        let mut z = Self::zero(space.clone(), module, field)?;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::Parse { line: idx + 1, msg };
            let (head, tail) = line
                .rsplit_once("e[")
                .ok_or_else(|| bad("missing e[..]".into()))?;
            let inner = tail
                .strip_suffix(']')
                .ok_or_else(|| bad("unterminated e[..]".into()))?;
            let mut set = IndexSet::EMPTY;
            for t in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let j: usize = t.parse().map_err(|_| bad(format!("bad index {t:?}")))?;
                if j == 0 || j > space.len() || set.contains(j - 1) {
                    return Err(bad(format!("bad or repeated index {j}")));
                }
                set = set.insert(j - 1);
            }
            let head = head
                .trim()
                .strip_suffix('*')
                .ok_or_else(|| bad("expected `*` before e[..]".into()))?;
            let (coeff, mono) = head
                .split_once('*')
                .ok_or_else(|| bad("expected `coeff * monomial`".into()))?;
            let c: i64 = coeff
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad coefficient {coeff:?}")))?;
            let u = Monomial::parse(mono, &space).map_err(bad)?;
            z.add_term(field.from_i64(c), u, set)?;
        }
        Ok(z)
    }

    /// Convenience for building the ideal coefficient module.
    pub fn ideal_module(i: &MonomialIdeal) -> CoefficientModule {
        CoefficientModule::Ideal(Arc::new(i.clone()))
    }
}
