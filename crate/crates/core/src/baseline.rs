//! Analytic reference functions: eight classic test functions with seeded
//! optimum shifts, and generalised Shekel foxholes with seeded peaks.

use std::f64::consts::{E, PI};
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;

/// Peak counts of the Shekel family.
pub const SHEKEL_PEAKS: [usize; 8] = [3, 5, 7, 10, 20, 30, 40, 50];

/// Box of every Shekel instance, per coordinate.
pub const SHEKEL_BOUNDS: (f64, f64) = (0.0, 10.0);

const SCHWEFEL_CONST: f64 = 418.982_887_272_433_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaselineKind {
    Sphere,
    Ellipsoid,
    Rastrigin,
    Rosenbrock,
    Ackley,
    Griewank,
    Schwefel,
    LinearSlope,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 8] = [
        BaselineKind::Sphere,
        BaselineKind::Ellipsoid,
        BaselineKind::Rastrigin,
        BaselineKind::Rosenbrock,
        BaselineKind::Ackley,
        BaselineKind::Griewank,
        BaselineKind::Schwefel,
        BaselineKind::LinearSlope,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaselineKind::Sphere => "sphere",
            BaselineKind::Ellipsoid => "ellipsoid",
            BaselineKind::Rastrigin => "rastrigin",
            BaselineKind::Rosenbrock => "rosenbrock",
            BaselineKind::Ackley => "ackley",
            BaselineKind::Griewank => "griewank",
            BaselineKind::Schwefel => "schwefel",
            BaselineKind::LinearSlope => "linear-slope",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Per-coordinate search box.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            BaselineKind::Schwefel => (-500.0, 500.0),
            _ => (-5.0, 5.0),
        }
    }

    /// The unshifted function.
    pub fn raw(self, x: &[f64]) -> f64 {
        let d = x.len();
        match self {
            BaselineKind::Sphere => x.iter().map(|v| v * v).sum(),
            BaselineKind::Ellipsoid => x
                .iter()
                .enumerate()
                .map(|(i, v)| 10f64.powf(6.0 * scale_exponent(i, d)) * v * v)
                .sum(),
            BaselineKind::Rastrigin => {
                10.0 * d as f64
                    + x.iter()
                        .map(|v| v * v - 10.0 * (2.0 * PI * v).cos())
                        .sum::<f64>()
            }
            BaselineKind::Rosenbrock => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum(),
            BaselineKind::Ackley => {
                let n = d as f64;
                let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
                let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
            }
            BaselineKind::Griewank => {
                let sum = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let prod: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                1.0 + sum - prod
            }
            BaselineKind::Schwefel => {
                SCHWEFEL_CONST * d as f64 - x.iter().map(|v| v * v.abs().sqrt().sin()).sum::<f64>()
            }
            BaselineKind::LinearSlope => x
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let s = 10f64.powf(scale_exponent(i, d));
                    s * (5.0 - v.min(5.0))
                })
                .sum(),
        }
    }
}

impl fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

// (i-1)/(d-1) with the d = 1 case pinned to 0
fn scale_exponent(i: usize, d: usize) -> f64 {
    if d <= 1 {
        0.0
    } else {
        i as f64 / (d - 1) as f64
    }
}

/// A classic function with its optimum shifted by a seeded vector.
///
/// Seed 0 is the canonical unshifted function; any other seed draws the
/// shift uniformly from the central half of the box.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedFunction {
    pub kind: BaselineKind,
    pub shift: Vec<f64>,
}

impl ShiftedFunction {
    pub fn new(kind: BaselineKind, seed: u64, d: usize) -> Self {
        let shift = if seed == 0 {
            vec![0.0; d]
        } else {
            let (lo, hi) = kind.bounds();
            let center = 0.5 * (lo + hi);
            let quarter = 0.25 * (hi - lo);
            let mut rng = rng::stream("baseline-shift", &[kind as u64, seed, d as u64]);
            (0..d)
                .map(|_| center + rng.random_range(-quarter..=quarter))
                .collect()
        };
        Self { kind, shift }
    }

    pub fn dimension(&self) -> usize {
        self.shift.len()
    }

    /// `f_0(x - shift)`; no bounds check.
    pub fn value(&self, x: &[f64]) -> f64 {
        let z: Vec<f64> = x.iter().zip(&self.shift).map(|(a, s)| a - s).collect();
        self.kind.raw(&z)
    }
}

/// Generalised Shekel foxholes, `f(x) = -sum_i 1 / (c_i + |x - a_i|^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShekelInstance {
    locations: Vec<Vec<f64>>,
    widths: Vec<f64>,
}

impl ShekelInstance {
    /// Peaks uniform in `[0,10]^d`, widths uniform in `(0,1]`.
    pub fn generate(peaks: usize, seed: u64, d: usize) -> Result<Self> {
        if !SHEKEL_PEAKS.contains(&peaks) {
            return Err(Error::UnknownProblem(format!("shekel-{peaks}")));
        }
        if d == 0 {
            return Err(Error::UnsupportedDimension {
                problem: format!("shekel-{peaks}"),
                dim: d,
            });
        }
        let mut rng = rng::stream("shekel", &[peaks as u64, seed, d as u64]);
        let (lo, hi) = SHEKEL_BOUNDS;
        let mut locations = Vec::with_capacity(peaks);
        let mut widths = Vec::with_capacity(peaks);
        for _ in 0..peaks {
            locations.push((0..d).map(|_| rng.random_range(lo..=hi)).collect());
            widths.push(1.0 - rng.random::<f64>());
        }
        Ok(Self { locations, widths })
    }

    /// Build from explicit parts. Widths must be positive, locations must
    /// share one dimension.
    pub fn from_parts(locations: Vec<Vec<f64>>, widths: Vec<f64>) -> Result<Self> {
        if locations.is_empty() || locations.len() != widths.len() {
            return Err(Error::EmptyInput);
        }
        let d = locations[0].len();
        if d == 0 || locations.iter().any(|a| a.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: locations
                    .iter()
                    .map(Vec::len)
                    .find(|&l| l != d)
                    .unwrap_or(0),
            });
        }
        if widths.iter().any(|&c| !(c > 0.0) || !c.is_finite()) {
            return Err(Error::Parse("Shekel widths must be positive".into()));
        }
        Ok(Self { locations, widths })
    }

    pub fn peaks(&self) -> usize {
        self.widths.len()
    }

    pub fn dimension(&self) -> usize {
        self.locations[0].len()
    }

    pub fn locations(&self) -> &[Vec<f64>] {
        &self.locations
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    /// The global lower bound `-sum 1/c_i`.
    pub fn lower_bound(&self) -> f64 {
        -self.widths.iter().map(|c| 1.0 / c).sum::<f64>()
    }

    /// Unchecked evaluation.
    pub fn value(&self, x: &[f64]) -> f64 {
        -self
            .locations
            .iter()
            .zip(&self.widths)
            .map(|(a, c)| {
                let sq: f64 = x.iter().zip(a).map(|(xi, ai)| (xi - ai) * (xi - ai)).sum();
                1.0 / (c + sq)
            })
            .sum::<f64>()
    }

    /// Evaluation with the `[0,10]^d` bounds check.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let d = self.dimension();
        check_box(x, &vec![SHEKEL_BOUNDS.0; d], &vec![SHEKEL_BOUNDS.1; d])?;
        Ok(self.value(x))
    }
}

pub(crate) fn check_box(x: &[f64], lower: &[f64], upper: &[f64]) -> Result<()> {
    if x.len() != lower.len() {
        return Err(Error::DimensionMismatch {
            expected: lower.len(),
            got: x.len(),
        });
    }
    for (i, ((&v, &lo), &hi)) in x.iter().zip(lower).zip(upper).enumerate() {
        // NaN fails both comparisons
        if !(v >= lo && v <= hi) {
            return Err(Error::OutOfBounds {
                index: i,
                value: v,
                lower: lo,
                upper: hi,
            });
        }
    }
    Ok(())
}

/// Evaluate a named baseline (`sphere`, ..., `shekel-<peaks>`) with bounds
/// checking.
pub fn baseline_eval(name: &str, instance_seed: u64, d: usize, x: &[f64]) -> Result<f64> {
    if let Some(peaks) = name.strip_prefix("shekel-") {
        let peaks: usize = peaks
            .parse()
            .map_err(|_| Error::UnknownProblem(name.to_string()))?;
        return ShekelInstance::generate(peaks, instance_seed, d)?.eval(x);
    }
    let kind = BaselineKind::from_name(name).ok_or_else(|| Error::UnknownProblem(name.into()))?;
    let (lo, hi) = kind.bounds();
    check_box(x, &vec![lo; d], &vec![hi; d])?;
    Ok(ShiftedFunction::new(kind, instance_seed, d).value(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_optima() {
        assert_eq!(baseline_eval("sphere", 0, 2, &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(baseline_eval("rastrigin", 0, 3, &[0.0; 3]).unwrap(), 0.0);
        assert_eq!(baseline_eval("rosenbrock", 0, 2, &[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(baseline_eval("griewank", 0, 4, &[0.0; 4]).unwrap(), 0.0);
        assert!(baseline_eval("ackley", 0, 5, &[0.0; 5]).unwrap().abs() < 1e-14);
        assert_eq!(baseline_eval("linear-slope", 0, 3, &[5.0; 3]).unwrap(), 0.0);
        let s = baseline_eval("schwefel", 0, 2, &[420.968_746_359_982; 2]).unwrap();
        assert!(s.abs() < 1e-8, "{s}");
    }

    #[test]
    fn ellipsoid_substitution() {
        // 10^0 * 1 + 10^6 * 1
        assert_eq!(
            baseline_eval("ellipsoid", 0, 2, &[1.0, 1.0]).unwrap(),
            1.0 + 1e6
        );
    }

    #[test]
    fn one_dimensional_scaled_functions() {
        assert_eq!(baseline_eval("ellipsoid", 0, 1, &[2.0]).unwrap(), 4.0);
        assert_eq!(baseline_eval("linear-slope", 0, 1, &[4.0]).unwrap(), 1.0);
    }

    #[test]
    fn out_of_bounds_and_unknown() {
        assert!(matches!(
            baseline_eval("sphere", 0, 2, &[6.0, 0.0]),
            Err(Error::OutOfBounds { index: 0, .. })
        ));
        assert!(matches!(
            baseline_eval("nope", 0, 2, &[0.0, 0.0]),
            Err(Error::UnknownProblem(_))
        ));
        assert!(matches!(
            baseline_eval("shekel-4", 1, 2, &[0.0, 0.0]),
            Err(Error::UnknownProblem(_))
        ));
        assert!(baseline_eval("shekel-3", 1, 2, &[10.5, 0.0]).is_err());
    }

    #[test]
    fn shift_lies_in_central_half() {
        for kind in BaselineKind::ALL {
            let (lo, hi) = kind.bounds();
            let f = ShiftedFunction::new(kind, 3, 10);
            for s in &f.shift {
                assert!(*s >= lo + 0.25 * (hi - lo) && *s <= hi - 0.25 * (hi - lo));
            }
        }
    }

    #[test]
    fn shifted_equals_unshifted_at_translated_point() {
        for kind in BaselineKind::ALL {
            let f = ShiftedFunction::new(kind, 7, 4);
            let x = [0.3, -1.2, 2.0, 0.7];
            let z: Vec<f64> = x.iter().zip(&f.shift).map(|(a, s)| a - s).collect();
            assert_eq!(f.value(&x).to_bits(), kind.raw(&z).to_bits());
        }
    }

    #[test]
    fn shekel_single_peak_and_two_peaks() {
        let s = ShekelInstance::from_parts(vec![vec![2.0, 3.0]], vec![0.4]).unwrap();
        assert_eq!(s.eval(&[2.0, 3.0]).unwrap(), -1.0 / 0.4);

        // (1,1) is at squared distance 2 from both (0,0) and (2,2)
        let s = ShekelInstance::from_parts(vec![vec![0.0, 0.0], vec![2.0, 2.0]], vec![0.5, 0.25])
            .unwrap();
        let expected = -(1.0 / (0.5 + 2.0) + 1.0 / (0.25 + 2.0));
        assert_eq!(s.eval(&[1.0, 1.0]).unwrap(), expected);
    }

    #[test]
    fn shekel_generation_is_deterministic_and_well_formed() {
        let a = ShekelInstance::generate(50, 2, 10).unwrap();
        let b = ShekelInstance::generate(50, 2, 10).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.peaks(), 50);
        assert!(a.widths().iter().all(|&c| c > 0.0 && c <= 1.0));
        assert!(a
            .locations()
            .iter()
            .flatten()
            .all(|&v| (0.0..=10.0).contains(&v)));
        assert_ne!(a, ShekelInstance::generate(50, 3, 10).unwrap());
    }

    #[test]
    fn bad_widths_rejected() {
        assert!(ShekelInstance::from_parts(vec![vec![1.0]], vec![0.0]).is_err());
    }
}
