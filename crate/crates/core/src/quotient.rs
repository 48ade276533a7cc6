//! Board dictionary into the quotient monoid, and outcome by product.
//!
//! The dictionary is not hard-coded. [`infer_value_table`] rebuilds it from
//! the exhaustive [`Oracle`]: every small multiset of boards yields the
//! constraint "the product of their values lies in the P-set exactly when the
//! oracle says P", and those constraints are propagated to a fixpoint before
//! a backtracking search settles whatever is left.

use std::collections::{BTreeMap, VecDeque};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use smallvec::SmallVec;
use thiserror::Error;

use crate::board::{enumerate_canonical, Board, CanonicalBoard};
use crate::monoid::{automorphisms, mul_index, p_mask, Automorphism, MonoidElement, ORDER};
use crate::oracle::{Oracle, Outcome};
use crate::position::Position;

/// Map from each of the 102 board classes to a monoid element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueTable {
    entries: BTreeMap<CanonicalBoard, MonoidElement>,
    by_mask: Box<[u8; 512]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("no entry for board class {0}")]
    MissingClass(u16),
    #[error("code {0} is not a canonical board")]
    NotCanonical(u16),
}

impl ValueTable {
    /// Builds a table; every canonical class must be present.
    pub fn from_entries<I>(entries: I) -> Result<ValueTable, TableError>
    where
        I: IntoIterator<Item = (CanonicalBoard, MonoidElement)>,
    {
        let entries: BTreeMap<_, _> = entries.into_iter().collect();
        if let Some(missing) = enumerate_canonical()
            .into_iter()
            .find(|c| !entries.contains_key(c))
        {
            return Err(TableError::MissingClass(missing.code()));
        }
        let mut by_mask = Box::new([0u8; 512]);
        for m in 0..512u32 {
            let class = Board::from_mask(m).unwrap().canonical();
            by_mask[m as usize] = entries[&class].index() as u8;
        }
        Ok(ValueTable { entries, by_mask })
    }

    pub fn get(&self, class: CanonicalBoard) -> MonoidElement {
        self.entries[&class]
    }

    /// Value of any board, through its class.
    pub fn value(&self, board: Board) -> MonoidElement {
        MonoidElement::from_index(self.by_mask[board.mask() as usize] as usize).unwrap()
    }

    #[inline]
    pub(crate) fn index_of_mask(&self, mask: u16) -> u8 {
        self.by_mask[mask as usize]
    }

    /// Entries in ascending code order.
    pub fn entries(&self) -> impl Iterator<Item = (CanonicalBoard, MonoidElement)> + '_ {
        self.entries.iter().map(|(&c, &v)| (c, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Image of the table under a monoid automorphism.
    pub fn map(&self, f: &Automorphism) -> ValueTable {
        ValueTable::from_entries(self.entries().map(|(c, v)| (c, f.apply(v))))
            .expect("class set unchanged")
    }

    /// Copy with one entry replaced.
    pub fn with_entry(&self, class: CanonicalBoard, value: MonoidElement) -> ValueTable {
        let mut entries = self.entries.clone();
        entries.insert(class, value);
        ValueTable::from_entries(entries).expect("class set unchanged")
    }
}

/// Product of the values of the boards of `p`. Dead boards are worth 1 in
/// any valid table; they are multiplied in like every other board.
pub fn position_value(p: &Position, t: &ValueTable) -> MonoidElement {
    let idx = p
        .boards()
        .iter()
        .fold(MonoidElement::ONE.index() as u8, |acc, b| {
            mul_index(acc, t.index_of_mask(b.mask()))
        });
    MonoidElement::from_index(idx as usize).unwrap()
}

pub fn outcome_via_quotient(p: &Position, t: &ValueTable) -> Outcome {
    Outcome::from_is_p(position_value(p, t).is_p())
}

/// Tunables for [`infer_value_table`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InferenceConfig {
    /// Largest multiset of boards turned into a constraint.
    pub max_context_size: usize,
    /// Constraints with more undecided classes than this wait until some
    /// of them are decided.
    pub max_unknowns_per_constraint: usize,
    /// Multiset size for the final exhaustive check of the result.
    pub verify_size: usize,
    /// Shuffle the constraint order. `None` keeps ascending size, then
    /// lexicographic codes.
    pub shuffle_seed: Option<u64>,
}

impl Default for InferenceConfig {
    fn default() -> Self {
        InferenceConfig {
            max_context_size: 3,
            max_unknowns_per_constraint: 2,
            verify_size: 3,
            shuffle_seed: None,
        }
    }
}

impl InferenceConfig {
    pub fn validate(&self) -> Result<(), InferenceError> {
        if self.max_context_size == 0
            || self.max_unknowns_per_constraint == 0
            || self.verify_size == 0
        {
            return Err(InferenceError::InvalidConfig(
                "context size, unknowns per constraint and verify size must all be at least 1"
                    .into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InferenceError {
    #[error("invalid inference config: {0}")]
    InvalidConfig(String),
    #[error("no labeling of the board classes satisfies the oracle: {0}")]
    NoConsistentAssignment(String),
    #[error("{} labelings survive verification", survivors.len())]
    AmbiguousAssignment { survivors: Vec<ValueTable> },
}

/// Multiset of live classes with multiplicities, and what the oracle says
/// about their sum.
#[derive(Clone, Debug)]
struct Constraint {
    terms: SmallVec<[(u16, u8); 4]>,
    is_p: bool,
}

type Domain = u32;
const FULL_DOMAIN: Domain = (1 << ORDER) - 1;

struct Problem {
    constraints: Vec<Constraint>,
    watchers: Vec<Vec<u32>>,
    /// `pow[x][m]`: element index of `x^m`.
    pow: Vec<[u8; ORDER]>,
    p_mask: u32,
    max_unknowns: usize,
}

impl Problem {
    fn pow(&self, x: u8, m: u8) -> u8 {
        self.pow[m as usize][x as usize]
    }

    /// Narrows `domains` to arc consistency with every constraint, starting
    /// from the constraints in `queue`.
    fn propagate(&self, domains: &mut [Domain], mut queue: VecDeque<u32>) -> Result<(), String> {
        let mut queued = vec![false; self.constraints.len()];
        for &c in &queue {
            queued[c as usize] = true;
        }
        while let Some(ci) = queue.pop_front() {
            queued[ci as usize] = false;
            let con = &self.constraints[ci as usize];
            let mut fixed = MonoidElement::ONE.index() as u8;
            let mut unknown: SmallVec<[(u16, u8); 4]> = SmallVec::new();
            for &(var, mult) in &con.terms {
                let d = domains[var as usize];
                if d.count_ones() == 1 {
                    fixed = mul_index(fixed, self.pow(d.trailing_zeros() as u8, mult));
                } else {
                    unknown.push((var, mult));
                }
            }
            if unknown.len() > self.max_unknowns {
                continue;
            }
            if unknown.is_empty() {
                if (self.p_mask >> fixed & 1 == 1) != con.is_p {
                    return Err(format!("constraint {:?} violated", con.terms));
                }
                continue;
            }
            let supported = self.supports(domains, fixed, &unknown, con.is_p);
            for (&(var, _), &keep) in unknown.iter().zip(&supported) {
                let d = &mut domains[var as usize];
                if keep == *d {
                    continue;
                }
                if keep == 0 {
                    return Err(format!("class index {var} has no value left"));
                }
                *d = keep;
                for &w in &self.watchers[var as usize] {
                    if !queued[w as usize] {
                        queued[w as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        Ok(())
    }

    /// For each unknown, the values that appear in some satisfying tuple.
    fn supports(
        &self,
        domains: &[Domain],
        fixed: u8,
        unknown: &[(u16, u8)],
        want_p: bool,
    ) -> SmallVec<[Domain; 4]> {
        let mut out: SmallVec<[Domain; 4]> = SmallVec::from_elem(0, unknown.len());
        let mut choice: SmallVec<[u8; 4]> = SmallVec::from_elem(0, unknown.len());
        self.walk(domains, fixed, unknown, want_p, 0, &mut choice, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        domains: &[Domain],
        acc: u8,
        unknown: &[(u16, u8)],
        want_p: bool,
        depth: usize,
        choice: &mut SmallVec<[u8; 4]>,
        out: &mut SmallVec<[Domain; 4]>,
    ) {
        if depth == unknown.len() {
            if (self.p_mask >> acc & 1 == 1) == want_p {
                for (o, &x) in out.iter_mut().zip(choice.iter()) {
                    *o |= 1 << x;
                }
            }
            return;
        }
        let (var, mult) = unknown[depth];
        let mut d = domains[var as usize];
        while d != 0 {
            let x = d.trailing_zeros() as u8;
            d &= d - 1;
            choice[depth] = x;
            let next = mul_index(acc, self.pow(x, mult));
            self.walk(domains, next, unknown, want_p, depth + 1, choice, out);
        }
    }

    fn all_constraints(&self) -> VecDeque<u32> {
        (0..self.constraints.len() as u32).collect()
    }

    /// Depth-first search over the undecided classes, collecting up to
    /// `limit` complete labelings.
    fn search(&self, domains: Vec<Domain>, found: &mut Vec<Vec<Domain>>, limit: usize) {
        if found.len() >= limit {
            return;
        }
        let pick = domains
            .iter()
            .enumerate()
            .filter(|(_, d)| d.count_ones() > 1)
            .min_by_key(|(i, d)| (d.count_ones(), *i))
            .map(|(i, _)| i);
        let Some(var) = pick else {
            found.push(domains);
            return;
        };
        let mut d = domains[var];
        while d != 0 {
            let x = d.trailing_zeros();
            d &= d - 1;
            let mut trial = domains.clone();
            trial[var] = 1 << x;
            let queue = self.watchers[var].iter().copied().collect();
            if self.propagate(&mut trial, queue).is_ok() {
                self.search(trial, found, limit);
                if found.len() >= limit {
                    return;
                }
            }
        }
    }
}

/// Calls `f` with every nondecreasing index sequence of length `size` over
/// `0..n`, in lexicographic order.
pub(crate) fn for_each_multiset(n: usize, size: usize, mut f: impl FnMut(&[usize])) {
    if size == 0 || n == 0 {
        return;
    }
    let mut idx = vec![0usize; size];
    loop {
        f(&idx);
        let mut pos = size;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if idx[pos] + 1 < n {
                let v = idx[pos] + 1;
                idx[pos..].iter_mut().for_each(|x| *x = v);
                break;
            }
        }
    }
}

/// Most labelings collected before giving up on uniqueness.
const SURVIVOR_LIMIT: usize = 32;

/// Result of [`infer`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inference {
    pub table: ValueTable,
    /// Other verified tables. Each is the image of `table` under an
    /// automorphism that fixes `c` and maps the P-set onto itself, so all of
    /// them predict every outcome identically.
    pub equivalent: Vec<ValueTable>,
}

/// Reconstructs the board dictionary from the oracle; see [`infer`].
pub fn infer_value_table(
    oracle: &Oracle,
    cfg: &InferenceConfig,
) -> Result<ValueTable, InferenceError> {
    infer(oracle, cfg).map(|inf| inf.table)
}

/// Reconstructs the board dictionary from the oracle.
///
/// Dead classes are pinned to 1 and the empty board to `c`. That anchor does
/// not make the answer unique: the automorphisms sending `d` to `bd`, `ad`
/// or `abd` fix `a`, `b`, `c` and the P-set, so they relabel the d-valued
/// classes of any valid table into another valid table. When every surviving
/// labeling is such an image of one other, the smallest (entries compared in
/// code order) is returned and the rest are listed in
/// [`Inference::equivalent`]. Any other disagreement is an
/// [`InferenceError::AmbiguousAssignment`].
pub fn infer(oracle: &Oracle, cfg: &InferenceConfig) -> Result<Inference, InferenceError> {
    cfg.validate()?;
    let classes = enumerate_canonical();
    let live: Vec<CanonicalBoard> = classes.iter().copied().filter(|c| !c.is_dead()).collect();
    let n = live.len();

    let mut constraints = Vec::new();
    for size in 1..=cfg.max_context_size {
        let mut key: SmallVec<[u16; 8]> = SmallVec::new();
        for_each_multiset(n, size, |ms| {
            key.clear();
            key.extend(ms.iter().map(|&i| live[i].code()));
            let is_p = oracle.outcome_of_key(&key).is_p();
            let mut terms: SmallVec<[(u16, u8); 4]> = SmallVec::new();
            for &i in ms {
                match terms.last_mut() {
                    Some((var, mult)) if *var as usize == i => *mult += 1,
                    _ => terms.push((i as u16, 1)),
                }
            }
            constraints.push(Constraint { terms, is_p });
        });
    }
    if let Some(seed) = cfg.shuffle_seed {
        constraints.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
    }

    let mut pow = vec![[0u8; ORDER]; cfg.max_context_size.max(cfg.verify_size) + 1];
    for x in 0..ORDER {
        let mut acc = MonoidElement::ONE.index() as u8;
        for row in pow.iter_mut() {
            row[x] = acc;
            acc = mul_index(acc, x as u8);
        }
    }
    let mut problem = Problem {
        constraints,
        watchers: Vec::new(),
        pow,
        p_mask: p_mask(),
        max_unknowns: cfg.max_unknowns_per_constraint,
    };
    let empty = live
        .iter()
        .position(|c| c.code() == 0)
        .expect("empty board is live");
    let var_of = |c: CanonicalBoard| live.binary_search(&c).ok().map(|i| i as u16);

    let to_table = |labels: &[Domain]| {
        let live_values = live.iter().zip(labels).map(|(&c, d)| {
            (
                c,
                MonoidElement::from_index(d.trailing_zeros() as usize).unwrap(),
            )
        });
        let dead_values = classes
            .iter()
            .filter(|c| c.is_dead())
            .map(|&c| (c, MonoidElement::ONE));
        ValueTable::from_entries(live_values.chain(dead_values)).expect("all classes labeled")
    };

    // Solve, verify, and feed every counterexample back as a constraint
    // until a round produces no counterexample.
    let mut survivors: Vec<ValueTable> = loop {
        problem.watchers = vec![Vec::new(); n];
        for (ci, con) in problem.constraints.iter().enumerate() {
            for &(var, _) in &con.terms {
                problem.watchers[var as usize].push(ci as u32);
            }
        }
        let mut domains = vec![FULL_DOMAIN; n];
        domains[empty] = 1 << MonoidElement::C.index();
        problem
            .propagate(&mut domains, problem.all_constraints())
            .map_err(InferenceError::NoConsistentAssignment)?;

        let mut labelings = Vec::new();
        problem.search(domains, &mut labelings, SURVIVOR_LIMIT);
        if labelings.is_empty() {
            return Err(InferenceError::NoConsistentAssignment(
                "search exhausted every candidate".into(),
            ));
        }
        let mut verified = Vec::new();
        let mut refuted = false;
        for labels in &labelings {
            let t = to_table(labels);
            match verify_table(&t, oracle, cfg.verify_size) {
                Ok(_) => verified.push(t),
                Err(VerifyError::Mismatch {
                    classes,
                    oracle: truth,
                    ..
                }) => {
                    let mut terms: SmallVec<[(u16, u8); 4]> = SmallVec::new();
                    for var in classes.iter().filter_map(|&c| var_of(c)) {
                        match terms.last_mut() {
                            Some((v, mult)) if *v == var => *mult += 1,
                            _ => terms.push((var, 1)),
                        }
                    }
                    problem.constraints.push(Constraint {
                        terms,
                        is_p: truth.is_p(),
                    });
                    refuted = true;
                }
            }
        }
        if !refuted {
            break verified;
        }
    };
    survivors.sort_by_cached_key(|t| t.entries().map(|(_, v)| v).collect::<Vec<_>>());
    let table = survivors.remove(0);
    let relabelings: Vec<&Automorphism> = automorphisms()
        .iter()
        .filter(|f| f.preserves_p() && f.apply(MonoidElement::C) == MonoidElement::C)
        .collect();
    let explained = survivors
        .iter()
        .all(|s| relabelings.iter().any(|f| table.map(f) == *s));
    if !explained {
        survivors.insert(0, table);
        return Err(InferenceError::AmbiguousAssignment { survivors });
    }
    Ok(Inference {
        table,
        equivalent: survivors,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub size_limit: usize,
    /// Multisets checked, over all sizes `1..=size_limit`.
    pub checked: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(
        "mismatch on {}: quotient value {value} says {quotient}, oracle says {oracle}",
        render_classes(classes)
    )]
    Mismatch {
        classes: Vec<CanonicalBoard>,
        value: MonoidElement,
        quotient: Outcome,
        oracle: Outcome,
        checked: u64,
    },
}

fn render_classes(classes: &[CanonicalBoard]) -> String {
    classes
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join("/")
}

/// Checks the table against the oracle on every multiset of at most
/// `size_limit` board classes, stopping at the first disagreement.
pub fn verify_table(
    t: &ValueTable,
    oracle: &Oracle,
    size_limit: usize,
) -> Result<VerifyReport, VerifyError> {
    let start = Instant::now();
    let classes = enumerate_canonical();
    let values: Vec<u8> = classes.iter().map(|c| t.index_of_mask(c.code())).collect();
    let one = MonoidElement::ONE.index() as u8;
    let pm = p_mask();
    let mut checked = 0u64;
    let mut failure = None;
    let mut key: SmallVec<[u16; 8]> = SmallVec::new();
    for size in 1..=size_limit {
        for_each_multiset(classes.len(), size, |ms| {
            if failure.is_some() {
                return;
            }
            checked += 1;
            let value = ms.iter().fold(one, |acc, &i| mul_index(acc, values[i]));
            let quotient = Outcome::from_is_p(pm >> value & 1 == 1);
            key.clear();
            key.extend(
                ms.iter()
                    .map(|&i| classes[i])
                    .filter(|c| !c.is_dead())
                    .map(|c| c.code()),
            );
            let truth = oracle.outcome_of_key(&key);
            if truth != quotient {
                failure = Some(VerifyError::Mismatch {
                    classes: ms.iter().map(|&i| classes[i]).collect(),
                    value: MonoidElement::from_index(value as usize).unwrap(),
                    quotient,
                    oracle: truth,
                    checked,
                });
            }
        });
        if let Some(err) = failure {
            return Err(err);
        }
    }
    Ok(VerifyReport {
        size_limit,
        checked,
        elapsed: start.elapsed(),
    })
}

/// Number of multisets of `size` drawn from `n` kinds.
pub fn multiset_count(n: u64, size: u64) -> u64 {
    // C(n + size - 1, size)
    (0..size).fold(1u64, |acc, i| acc * (n + i) / (i + 1))
}
