//! Face-formula entailment.
//!
//! The assumptions of a context are kept in disjunctive normal form: a list of
//! branches, each a conjunction of dimension equations represented as a
//! union-find partition of `{0, 1} ∪ {dimension variables}`. Dimension
//! variables are de Bruijn levels here.

use std::fmt;

use crate::syntax::{Dim, Formula};

/// One conjunction of equations. Slot 0 is the constant 0, slot 1 the
/// constant 1, slot `2 + l` the dimension variable at level `l`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Branch {
    parent: Vec<u32>,
}

fn slot(r: Dim) -> usize {
    match r {
        Dim::Zero => 0,
        Dim::One => 1,
        Dim::Var(l) => l as usize + 2,
    }
}

fn unslot(k: usize) -> Dim {
    match k {
        0 => Dim::Zero,
        1 => Dim::One,
        k => Dim::Var(k as u32 - 2),
    }
}

impl Branch {
    pub fn new(dims: usize) -> Branch {
        Branch {
            parent: (0..dims as u32 + 2).collect(),
        }
    }

    pub fn dims(&self) -> usize {
        self.parent.len() - 2
    }

    fn find(&self, mut k: usize) -> usize {
        while self.parent[k] as usize != k {
            k = self.parent[k] as usize;
        }
        k
    }

    /// Roots are always the least slot of their class, so constants win and
    /// variable classes are named by their lowest level.
    fn union(&mut self, r: Dim, s: Dim) {
        let (a, b) = (self.find(slot(r)), self.find(slot(s)));
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo as u32;
    }

    fn bind_dim(&mut self) {
        let k = self.parent.len() as u32;
        self.parent.push(k);
    }

    pub fn is_inconsistent(&self) -> bool {
        self.find(1) == 0
    }

    pub fn holds(&self, r: Dim, s: Dim) -> bool {
        self.is_inconsistent() || self.find(slot(r)) == self.find(slot(s))
    }

    pub fn entails(&self, phi: &Formula) -> bool {
        self.is_inconsistent() || phi.atoms().into_iter().any(|(r, s)| self.holds(r, s))
    }

    /// Canonical representative of `r`'s class.
    pub fn normalize_dim(&self, r: Dim) -> Dim {
        unslot(self.find(slot(r)))
    }

    /// The class representative of every slot; equal signatures mean equal
    /// partitions.
    pub fn signature(&self) -> Vec<u32> {
        (0..self.parent.len()).map(|k| self.find(k) as u32).collect()
    }
}

impl fmt::Debug for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inconsistent() {
            return write!(f, "{{⊥}}");
        }
        let mut parts = Vec::new();
        for k in 2..self.parent.len() {
            let root = self.find(k);
            if root != k {
                parts.push(format!("{}~{}", show_level(unslot(k)), show_level(unslot(root))));
            }
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn show_level(r: Dim) -> String {
    match r {
        Dim::Zero => "0".into(),
        Dim::One => "1".into(),
        Dim::Var(l) => format!("#{l}"),
    }
}

/// The disjunctive normal form of a context's face assumptions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverState {
    dims: usize,
    branches: Vec<Branch>,
}

impl SolverState {
    /// No assumptions over `dims` dimension variables.
    pub fn new(dims: usize) -> SolverState {
        SolverState {
            dims,
            branches: vec![Branch::new(dims)],
        }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Extends the dimension set with a fresh, unconstrained variable whose
    /// level is the old `dims()`.
    pub fn bind_dim(&self) -> SolverState {
        let mut next = self.clone();
        next.dims += 1;
        next.branches.iter_mut().for_each(Branch::bind_dim);
        next
    }

    /// Splits every branch along the disjuncts of `phi`.
    pub fn assume(&self, phi: &Formula) -> SolverState {
        let atoms = phi.atoms();
        let mut branches: Vec<Branch> = Vec::with_capacity(self.branches.len() * atoms.len());
        // Same partition, same branch, however the union-find got there.
        let mut seen = Vec::with_capacity(branches.capacity());
        for b in &self.branches {
            for &(r, s) in &atoms {
                debug_assert!(slot(r) < b.parent.len() && slot(s) < b.parent.len());
                let mut next = b.clone();
                next.union(r, s);
                let sig = next.signature();
                if !seen.contains(&sig) {
                    seen.push(sig);
                    branches.push(next);
                }
            }
        }
        SolverState {
            dims: self.dims,
            branches,
        }
    }

    pub fn entails(&self, phi: &Formula) -> bool {
        self.branches.iter().all(|b| b.entails(phi))
    }

    pub fn holds(&self, r: Dim, s: Dim) -> bool {
        self.branches.iter().all(|b| b.holds(r, s))
    }

    pub fn equal_formulas(&self, phi: &Formula, psi: &Formula) -> bool {
        self.assume(phi).entails(psi) && self.assume(psi).entails(phi)
    }

    pub fn is_inconsistent(&self) -> bool {
        self.branches.iter().all(Branch::is_inconsistent)
    }

    /// The consistent branches, each as a state of its own.
    pub fn consistent_branches(&self) -> Vec<SolverState> {
        self.branches
            .iter()
            .filter(|b| !b.is_inconsistent())
            .map(|b| SolverState {
                dims: self.dims,
                branches: vec![b.clone()],
            })
            .collect()
    }

    /// The unique branch, when there is exactly one.
    pub fn single(&self) -> Option<&Branch> {
        match self.branches.as_slice() {
            [b] => Some(b),
            _ => None,
        }
    }

    /// Canonical form of `r` when the state has a single branch.
    pub fn normalize_dim(&self, r: Dim) -> Dim {
        match self.single() {
            Some(b) if !b.is_inconsistent() => b.normalize_dim(r),
            _ => r,
        }
    }

    /// Levels of dimension variables that are still undetermined: not equal
    /// to a constant and the least member of their class. Only meaningful
    /// for single-branch states.
    pub fn free_dims(&self) -> Vec<u32> {
        match self.single() {
            Some(b) if !b.is_inconsistent() => (0..self.dims as u32)
                .filter(|&l| b.normalize_dim(Dim::Var(l)) == Dim::Var(l))
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn signature(&self) -> Vec<Vec<u32>> {
        self.branches.iter().map(Branch::signature).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Dim = Dim::Var(0);
    const J: Dim = Dim::Var(1);

    fn eq(r: Dim, s: Dim) -> Formula {
        Formula::eq(r, s)
    }

    #[test]
    fn trivial_assumption_keeps_one_branch() {
        let s = SolverState::new(0).assume(&eq(Dim::Zero, Dim::Zero));
        assert_eq!(s.branches().len(), 1);
        assert!(!s.is_inconsistent());
        assert!(SolverState::new(0).entails(&eq(Dim::Zero, Dim::Zero)));
    }

    #[test]
    fn boundary_splits_in_two() {
        let s = SolverState::new(1).assume(&Formula::boundary(I));
        assert_eq!(s.branches().len(), 2);
        assert_eq!(s.branches()[0].normalize_dim(I), Dim::Zero);
        assert_eq!(s.branches()[1].normalize_dim(I), Dim::One);
    }

    #[test]
    fn falsehood_is_one_inconsistent_branch() {
        let s = SolverState::new(0).assume(&Formula::bottom());
        assert_eq!(s.branches().len(), 1);
        assert!(s.is_inconsistent());
        assert!(s.entails(&eq(Dim::Zero, Dim::One)));
        assert!(!SolverState::new(0).is_inconsistent());
    }

    #[test]
    fn boundary_of_free_variable_not_entailed() {
        assert!(!SolverState::new(1).entails(&Formula::boundary(I)));
    }

    #[test]
    fn entailment_through_both_branches() {
        let s = SolverState::new(2)
            .assume(&eq(I, J).or(eq(J, Dim::Zero)))
            .assume(&eq(I, Dim::Zero));
        assert!(s.entails(&eq(J, Dim::Zero)));
    }

    #[test]
    fn formula_equality() {
        let s = SolverState::new(1);
        let swapped = eq(I, Dim::One).or(eq(I, Dim::Zero));
        assert!(s.equal_formulas(&Formula::boundary(I), &swapped));
        assert!(!s.equal_formulas(&eq(I, Dim::Zero), &eq(I, Dim::One)));
        let absurd = s.assume(&Formula::bottom());
        assert!(absurd.equal_formulas(&Formula::bottom(), &Formula::boundary(I)));
    }

    #[test]
    fn representatives() {
        let mut b = Branch::new(2);
        b.union(I, Dim::Zero);
        assert_eq!(b.normalize_dim(I), Dim::Zero);
        let b = Branch::new(2);
        assert_eq!(b.normalize_dim(J), J);
        let mut b = Branch::new(2);
        b.union(J, I);
        assert_eq!(b.normalize_dim(J), I);
    }

    #[test]
    fn both_endpoints_collapse() {
        let s = SolverState::new(1).assume(&eq(I, Dim::Zero)).assume(&eq(I, Dim::One));
        assert!(s.is_inconsistent());
    }

    #[test]
    fn fresh_dimension_is_unconstrained() {
        let s = SolverState::new(1).assume(&eq(I, Dim::Zero)).bind_dim();
        assert_eq!(s.dims(), 2);
        assert_eq!(s.free_dims(), vec![1]);
    }
}
