//! A proof-search oracle for face-formula entailment, written independently
//! of the solver: disjunctive assumptions are eliminated one at a time, the
//! remaining equations are saturated under reflexivity, symmetry and
//! transitivity as a relation matrix, and the goal is proved by
//! ∨-introduction. Evaluating formulas at 0/1 assignments would be wrong:
//! `i = 0 \/ i = 1` holds at every assignment but is not derivable.

use crate::face::SolverState;
use crate::syntax::{Dim, Formula};

/// Transitivity chains are explored up to this many steps.
pub const SEARCH_DEPTH: usize = 8;

/// Elements of the interval in a sequent over `dims` variables: 0, 1, then
/// the variables by level.
fn index(r: Dim) -> usize {
    match r {
        Dim::Zero => 0,
        Dim::One => 1,
        Dim::Var(l) => 2 + l as usize,
    }
}

/// Derivable equations from atomic assumptions, by bounded chaining.
fn saturate(size: usize, atoms: &[(Dim, Dim)]) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; size]; size];
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = true;
    }
    for &(r, s) in atoms {
        let (a, b) = (index(r), index(s));
        m[a][b] = true;
        m[b][a] = true;
    }
    for _ in 0..SEARCH_DEPTH {
        let mut next = m.clone();
        for a in 0..size {
            for b in 0..size {
                if m[a][b] {
                    for c in 0..size {
                        if m[b][c] {
                            next[a][c] = true;
                        }
                    }
                }
            }
        }
        if next == m {
            break;
        }
        m = next;
    }
    m
}

fn prove_goal(m: &[Vec<bool>], goal: &Formula) -> bool {
    if m[0][1] {
        // 0 = 1 proves anything.
        return true;
    }
    match goal {
        Formula::Eq(r, s) => m[index(*r)][index(*s)],
        Formula::Or(a, b) => prove_goal(m, a) || prove_goal(m, b),
    }
}

/// The atomic contexts obtained by eliminating every disjunction among the
/// assumptions: the goal must be provable in each of them.
pub fn leaves(assumptions: &[Formula]) -> Vec<Vec<(Dim, Dim)>> {
    fn go(rest: &[Formula], atoms: &mut Vec<(Dim, Dim)>, out: &mut Vec<Vec<(Dim, Dim)>>) {
        let Some((first, rest)) = rest.split_first() else {
            out.push(atoms.clone());
            return;
        };
        match first {
            Formula::Eq(r, s) => {
                atoms.push((*r, *s));
                go(rest, atoms, out);
                atoms.pop();
            }
            Formula::Or(a, b) => {
                for side in [a, b] {
                    let mut pending = vec![(**side).clone()];
                    pending.extend_from_slice(rest);
                    go(&pending, atoms, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    go(assumptions, &mut Vec::new(), &mut out);
    out
}

/// A sequent's context, prepared once for many goals.
pub struct Sequent {
    leaves: Vec<Vec<Vec<bool>>>,
}

impl Sequent {
    pub fn new(dims: usize, assumptions: &[Formula]) -> Sequent {
        Sequent {
            leaves: leaves(assumptions).iter().map(|atoms| saturate(dims + 2, atoms)).collect(),
        }
    }

    pub fn proves(&self, goal: &Formula) -> bool {
        self.leaves.iter().all(|m| prove_goal(m, goal))
    }
}

/// Is `goal` derivable from `assumptions` over `dims` dimension variables?
pub fn oracle_entails(dims: usize, assumptions: &[Formula], goal: &Formula) -> bool {
    Sequent::new(dims, assumptions).proves(goal)
}

/// Every formula of depth at most 2 over `dims` variables: equations
/// (unordered, reflexive ones included) and binary disjunctions of
/// distinct equations.
pub fn formulas(dims: usize) -> Vec<Formula> {
    let elems: Vec<Dim> = [Dim::Zero, Dim::One]
        .into_iter()
        .chain((0..dims as u32).map(Dim::Var))
        .collect();
    let mut atoms = Vec::new();
    for (k, &r) in elems.iter().enumerate() {
        for &s in &elems[k..] {
            atoms.push(Formula::eq(r, s));
        }
    }
    let mut all = atoms.clone();
    for (k, a) in atoms.iter().enumerate() {
        for b in &atoms[k + 1..] {
            all.push(a.clone().or(b.clone()));
        }
    }
    all
}

/// Every context of at most `max` assumptions drawn from `pool`, as
/// multisets.
pub fn contexts(pool: &[Formula], max: usize) -> Vec<Vec<Formula>> {
    fn go(pool: &[Formula], from: usize, left: usize, cur: &mut Vec<Formula>, out: &mut Vec<Vec<Formula>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for k in from..pool.len() {
            cur.push(pool[k].clone());
            go(pool, k, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, 0, max, &mut Vec::new(), &mut out);
    out
}

/// A sequent on which the solver and the oracle disagree.
#[derive(Clone, Debug)]
pub struct Disagreement {
    pub dims: usize,
    pub assumptions: Vec<Formula>,
    pub goal: Formula,
    pub solver: bool,
}

#[derive(Clone, Debug, Default)]
pub struct GridReport {
    pub sequents: usize,
    pub disagreements: Vec<Disagreement>,
}

/// Compares the solver's entailment with the oracle on every sequent with at
/// most `max_dims` variables and `max_assumptions` assumptions of depth at
/// most 2.
pub fn compare_grid(max_dims: usize, max_assumptions: usize) -> GridReport {
    let mut report = GridReport::default();
    for dims in 0..=max_dims {
        let pool = formulas(dims);
        for ctx in contexts(&pool, max_assumptions) {
            let state = ctx.iter().fold(SolverState::new(dims), |s, phi| s.assume(phi));
            let sequent = Sequent::new(dims, &ctx);
            for goal in &pool {
                report.sequents += 1;
                let solver = state.entails(goal);
                if solver != sequent.proves(goal) {
                    report.disagreements.push(Disagreement {
                        dims,
                        assumptions: ctx.clone(),
                        goal: goal.clone(),
                        solver,
                    });
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(r: Dim, s: Dim) -> Formula {
        Formula::eq(r, s)
    }

    #[test]
    fn trivial_goal() {
        assert!(oracle_entails(0, &[], &eq(Dim::Zero, Dim::Zero)));
    }

    #[test]
    fn boundary_of_a_variable_is_not_derivable() {
        let i = Dim::Var(0);
        assert!(!oracle_entails(1, &[], &Formula::boundary(i)));
    }

    #[test]
    fn disjunctive_assumption_is_eliminated() {
        let (i, j) = (Dim::Var(0), Dim::Var(1));
        let ctx = [eq(i, j).or(eq(j, Dim::Zero)), eq(i, Dim::Zero)];
        assert!(oracle_entails(2, &ctx, &eq(j, Dim::Zero)));
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(formulas(0).len(), 3 + 3);
        assert_eq!(contexts(&formulas(0), 1).len(), 1 + 6);
    }

    #[test]
    fn solver_agrees_on_two_variables() {
        let report = compare_grid(2, 2);
        assert!(report.disagreements.is_empty(), "{:?}", &report.disagreements[..1]);
    }
}
