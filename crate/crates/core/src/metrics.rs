//! Operation counting and closed-form cost predictors.
//!
//! Every instrumented operation takes an explicit `&mut OpCounter`; there is no
//! global counter. A "visit" is one focal element examined (one subset or
//! intersection test), charged to the phase that performed it.

use std::fmt::Write as _;

/// Cost phases, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    Partition,
    Complement,
    Construction,
    Preprocess,
    Query,
    Combination,
    Transform,
}

impl Phase {
    pub const ALL: [Phase; 7] = [
        Phase::Partition,
        Phase::Complement,
        Phase::Construction,
        Phase::Preprocess,
        Phase::Query,
        Phase::Combination,
        Phase::Transform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Phase::Partition => "partition",
            Phase::Complement => "complement",
            Phase::Construction => "construction",
            Phase::Preprocess => "preprocess",
            Phase::Query => "query",
            Phase::Combination => "combination",
            Phase::Transform => "transform",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpCounter {
    phases: [u64; Phase::ALL.len()],
    mass_transfers: u64,
    root_designations: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn visit(&mut self, phase: Phase) {
        self.phases[phase as usize] += 1;
    }

    #[inline]
    pub fn visits(&mut self, phase: Phase, n: u64) {
        self.phases[phase as usize] += n;
    }

    #[inline]
    pub fn transfer(&mut self) {
        self.mass_transfers += 1;
    }

    /// Roots are tallied apart from the construction phase.
    #[inline]
    pub fn designate_root(&mut self) {
        self.root_designations += 1;
    }

    pub fn phase(&self, phase: Phase) -> u64 {
        self.phases[phase as usize]
    }

    pub fn mass_transfers(&self) -> u64 {
        self.mass_transfers
    }

    pub fn root_designations(&self) -> u64 {
        self.root_designations
    }

    /// All visits across phases.
    pub fn pair_visits(&self) -> u64 {
        self.phases.iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.pair_visits()
    }

    pub fn merge(&mut self, other: &OpCounter) {
        for (a, b) in self.phases.iter_mut().zip(other.phases.iter()) {
            *a += b;
        }
        self.mass_transfers += other.mass_transfers;
        self.root_designations += other.root_designations;
    }

    /// Fixed-order text table, one `name  value` pair per line.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for p in Phase::ALL {
            let _ = writeln!(out, "{}  {}", p.name(), self.phase(p));
        }
        let _ = writeln!(out, "pair_visits  {}", self.pair_visits());
        let _ = writeln!(out, "mass_transfers  {}", self.mass_transfers);
        let _ = writeln!(out, "root_designations  {}", self.root_designations);
        let _ = writeln!(out, "total  {}", self.total());
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Measure {
    Bel,
    Pl,
    Q,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Bel => "bel",
            Measure::Pl => "pl",
            Measure::Q => "q",
        }
    }
}

/// Cost of computing `measure` for every focal element from the cardinality
/// partition. `class_sizes[i - 1]` is the number of focal elements of
/// cardinality `i`.
pub fn predicted_partition_cost(class_sizes: &[usize], measure: Measure) -> u128 {
    let n = class_sizes.len();
    let c = |i: usize| class_sizes[i - 1] as u128;
    let focal: u128 = class_sizes.iter().map(|&s| s as u128).sum();
    let mut pairs = 0u128;
    for i in 1..=n {
        let js: Box<dyn Iterator<Item = usize>> = match measure {
            Measure::Bel => Box::new(1..i),
            Measure::Q => Box::new(i + 1..=n),
            Measure::Pl => Box::new(1..=n.saturating_sub(i + 1)),
        };
        pairs += js.map(|j| c(i) * c(j)).sum::<u128>();
    }
    focal + pairs
}

/// Brute-force combination cost `|F1| * |F2|`.
pub fn predicted_brute_cost(f1: u64, f2: u64) -> u128 {
    f1 as u128 * f2 as u128
}

/// Worst-case brute-force expression `2^{2n} - 2^{n+1}` as printed in the
/// literature; one less than `(2^n - 1)^2`.
pub fn predicted_brute_worst_case(n: u32) -> u128 {
    (1u128 << (2 * n)) - (1u128 << (n + 1))
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
