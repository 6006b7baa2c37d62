//! Bounded minimisation problems, the problem registry and evaluation.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::baseline::{
    self, BaselineKind, ShekelInstance, ShiftedFunction, SHEKEL_BOUNDS, SHEKEL_PEAKS,
};
use crate::error::{Error, Result};
use crate::level::TileGrid;
use crate::mario::{self, MarioProblem};

/// Axis-aligned search box.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower
            .iter()
            .zip(&upper)
            .any(|(l, u)| !(l < u) || !l.is_finite() || !u.is_finite())
        {
            return Err(Error::Parse(
                "box needs finite lower < upper in every coordinate".into(),
            ));
        }
        Ok(Self { lower, upper })
    }

    pub fn cube(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.check(x).is_ok()
    }

    /// Inclusive bounds check.
    pub fn check(&self, x: &[f64]) -> Result<()> {
        baseline::check_box(x, &self.lower, &self.upper)
    }

    pub fn diagonal_length(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| (u - l) * (u - l))
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Mario,
    Baseline,
}

/// Textual ids: `m1`..`m28`, the baseline names, `shekel-<peaks>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemId {
    Mario(u8),
    Function(BaselineKind),
    Shekel(usize),
}

impl ProblemId {
    pub fn suite(self) -> Suite {
        match self {
            ProblemId::Mario(_) => Suite::Mario,
            _ => Suite::Baseline,
        }
    }

    /// Grouping label used in embedding output.
    pub fn family(self) -> &'static str {
        match self {
            ProblemId::Mario(_) => "mario",
            ProblemId::Function(_) => "baseline",
            ProblemId::Shekel(_) => "shekel",
        }
    }

    pub fn all_mario() -> Vec<ProblemId> {
        (1..=mario::PROBLEM_COUNT).map(ProblemId::Mario).collect()
    }

    pub fn all_functions() -> Vec<ProblemId> {
        BaselineKind::ALL
            .into_iter()
            .map(ProblemId::Function)
            .collect()
    }

    pub fn all_shekel() -> Vec<ProblemId> {
        SHEKEL_PEAKS.into_iter().map(ProblemId::Shekel).collect()
    }

    /// Every registered id.
    pub fn all() -> Vec<ProblemId> {
        let mut ids = Self::all_mario();
        ids.extend(Self::all_functions());
        ids.extend(Self::all_shekel());
        ids
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemId::Mario(i) => write!(f, "m{i}"),
            ProblemId::Function(k) => f.write_str(k.name()),
            ProblemId::Shekel(p) => write!(f, "shekel-{p}"),
        }
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownProblem(s.to_string());
        if let Some(rest) = s.strip_prefix('m') {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                let i: u8 = rest.parse().map_err(|_| unknown())?;
                if (1..=mario::PROBLEM_COUNT).contains(&i) {
                    return Ok(ProblemId::Mario(i));
                }
                return Err(unknown());
            }
        }
        if let Some(rest) = s.strip_prefix("shekel-") {
            let peaks: usize = rest.parse().map_err(|_| unknown())?;
            if SHEKEL_PEAKS.contains(&peaks) {
                return Ok(ProblemId::Shekel(peaks));
            }
            return Err(unknown());
        }
        BaselineKind::from_name(s)
            .map(ProblemId::Function)
            .ok_or_else(unknown)
    }
}

#[derive(Debug, Clone)]
enum Objective {
    Mario(Box<MarioProblem>),
    Function(ShiftedFunction),
    Shekel(ShekelInstance),
}

/// An immutable, fully determined objective function.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    id: ProblemId,
    instance_seed: u64,
    domain: BoxDomain,
    objective: Objective,
}

/// Look up `(id, seed, dim)`. Mario seeds are 1..=7 and `dim >= 2`;
/// baselines take any seed (0 = unshifted) and `dim >= 1`.
pub fn resolve(id: ProblemId, instance_seed: u64, dim: usize) -> Result<ProblemInstance> {
    let unsupported = || Error::UnsupportedDimension {
        problem: id.to_string(),
        dim,
    };
    let (domain, objective) = match id {
        ProblemId::Mario(i) => {
            let p = MarioProblem::new(i, instance_seed, dim)?;
            (
                BoxDomain::cube(dim, -1.0, 1.0)?,
                Objective::Mario(Box::new(p)),
            )
        }
        ProblemId::Function(kind) => {
            if dim == 0 {
                return Err(unsupported());
            }
            let (lo, hi) = kind.bounds();
            (
                BoxDomain::cube(dim, lo, hi)?,
                Objective::Function(ShiftedFunction::new(kind, instance_seed, dim)),
            )
        }
        ProblemId::Shekel(peaks) => {
            if dim == 0 {
                return Err(unsupported());
            }
            (
                BoxDomain::cube(dim, SHEKEL_BOUNDS.0, SHEKEL_BOUNDS.1)?,
                Objective::Shekel(ShekelInstance::generate(peaks, instance_seed, dim)?),
            )
        }
    };
    Ok(ProblemInstance {
        id,
        instance_seed,
        domain,
        objective,
    })
}

impl ProblemInstance {
    pub fn id(&self) -> ProblemId {
        self.id
    }

    pub fn instance_seed(&self) -> u64 {
        self.instance_seed
    }

    pub fn dimension(&self) -> usize {
        self.domain.dimension()
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn mario(&self) -> Option<&MarioProblem> {
        match &self.objective {
            Objective::Mario(p) => Some(p),
            _ => None,
        }
    }

    /// The decoded level for mario problems.
    pub fn level(&self, x: &[f64]) -> Option<Result<TileGrid>> {
        self.mario().map(|p| p.level(x))
    }

    /// Objective value (minimisation). Pure and thread-safe.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.domain.check(x)?;
        Ok(match &self.objective {
            Objective::Mario(p) => p.value(x)?,
            Objective::Function(f) => f.value(x),
            Objective::Shekel(s) => s.value(x),
        })
    }
}

/// Counts evaluations of a shared instance.
#[derive(Debug)]
pub struct CountingEvaluator<'a> {
    inner: &'a ProblemInstance,
    count: AtomicU64,
}

impl<'a> CountingEvaluator<'a> {
    pub fn new(inner: &'a ProblemInstance) -> Self {
        Self {
            inner,
            count: AtomicU64::new(0),
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.count.fetch_add(1, Ordering::Relaxed);
        self.inner.evaluate(x)
    }

    pub fn evaluations(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rayon::prelude::*;

    #[test]
    fn resolve_examples() {
        let m7 = resolve("m7".parse().unwrap(), 1, 10).unwrap();
        assert_eq!(m7.domain(), &BoxDomain::cube(10, -1.0, 1.0).unwrap());
        assert!(matches!(
            "m29".parse::<ProblemId>(),
            Err(Error::UnknownProblem(_))
        ));
        assert!(matches!(
            resolve(ProblemId::Mario(7), 8, 10),
            Err(Error::UnsupportedSeed { .. })
        ));
        assert!(matches!(
            resolve(ProblemId::Function(BaselineKind::Sphere), 1, 0),
            Err(Error::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn evaluate_examples() {
        let m7 = resolve(ProblemId::Mario(7), 1, 10).unwrap();
        let v = m7.evaluate(&[0.25; 10]).unwrap();
        assert!((0.0..=1.0).contains(&v));
        let mut x = vec![0.0; 10];
        x[3] = 1.5;
        assert!(matches!(
            m7.evaluate(&x),
            Err(Error::OutOfBounds { index: 3, .. })
        ));
        let sphere = resolve(ProblemId::Function(BaselineKind::Sphere), 0, 2).unwrap();
        assert_eq!(sphere.evaluate(&[0.0, 0.0]).unwrap(), 0.0);
        assert!(sphere.evaluate(&[f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn ids_round_trip() {
        for id in ProblemId::all() {
            assert_eq!(id.to_string().parse::<ProblemId>().unwrap(), id);
        }
        assert_eq!(ProblemId::all_mario().len(), 28);
        for bad in ["m0", "m", "mx", "shekel-4", "shekel-", "cube", "m07x"] {
            assert!(bad.parse::<ProblemId>().is_err(), "{bad}");
        }
    }

    #[test]
    fn registry_evaluation_is_deterministic() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for id in ProblemId::all() {
            let seeds: Vec<u64> = match id {
                ProblemId::Mario(_) => vec![1, 7],
                _ => vec![0, 1, 5],
            };
            for seed in seeds {
                let a = resolve(id, seed, 10).unwrap();
                let b = resolve(id, seed, 10).unwrap();
                let points = if id.suite() == Suite::Mario { 5 } else { 100 };
                for _ in 0..points {
                    let x: Vec<f64> = a
                        .domain()
                        .lower()
                        .iter()
                        .zip(a.domain().upper())
                        .map(|(l, u)| rng.random_range(*l..=*u))
                        .collect();
                    let va = a.evaluate(&x).unwrap();
                    assert_eq!(va.to_bits(), a.evaluate(&x).unwrap().to_bits());
                    assert_eq!(va.to_bits(), b.evaluate(&x).unwrap().to_bits());
                    if id.suite() == Suite::Mario {
                        assert!((0.0..=1.0).contains(&va));
                    }
                }
            }
        }
    }

    #[test]
    fn concurrent_evaluation_matches_sequential() {
        let inst = resolve(ProblemId::Mario(11), 2, 10).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let points: Vec<Vec<f64>> = (0..64)
            .map(|_| (0..10).map(|_| rng.random_range(-1.0..=1.0)).collect())
            .collect();
        let seq: Vec<u64> = points
            .iter()
            .map(|x| inst.evaluate(x).unwrap().to_bits())
            .collect();
        let par: Vec<u64> = points
            .par_iter()
            .map(|x| inst.evaluate(x).unwrap().to_bits())
            .collect();
        assert_eq!(seq, par);
    }

    #[test]
    fn counting_wrapper() {
        let inst = resolve(ProblemId::Function(BaselineKind::Sphere), 0, 3).unwrap();
        let c = CountingEvaluator::new(&inst);
        for _ in 0..4 {
            c.evaluate(&[0.0; 3]).unwrap();
        }
        assert_eq!(c.evaluations(), 4);
    }

    #[test]
    fn box_validation() {
        assert!(BoxDomain::new(vec![1.0], vec![1.0]).is_err());
        assert!(BoxDomain::new(vec![], vec![]).is_err());
        let b = BoxDomain::cube(2, -1.0, 1.0).unwrap();
        assert!(b.contains(&[1.0, -1.0]));
        assert!(!b.contains(&[1.0 + 1e-15, 0.0]));
        assert!((b.diagonal_length() - 8f64.sqrt()).abs() < 1e-15);
    }
}
