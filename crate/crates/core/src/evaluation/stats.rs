use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::classifiers::ClassifierKind;
use crate::error::{Error, Result};
use crate::math;

/// Mean and sample standard deviation over the defined entries of a series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub n_defined: usize,
}

impl Aggregate {
    pub const UNDEFINED: Aggregate = Aggregate {
        mean: None,
        std: None,
        n_defined: 0,
    };

    pub fn from_values(values: &[f64]) -> Self {
        Self::from_options(values.iter().copied().map(Some))
    }

    pub fn from_options<I: IntoIterator<Item = Option<f64>>>(values: I) -> Self {
        let defined: Vec<f64> = values.into_iter().flatten().collect();
        let n = defined.len();
        if n == 0 {
            return Self::UNDEFINED;
        }
        let mean = defined.iter().sum::<f64>() / n as f64;
        let std = if n == 1 {
            0.0
        } else {
            let ss: f64 = defined.iter().map(|v| (v - mean) * (v - mean)).sum();
            math::sqrt(ss / (n - 1) as f64)
        };
        Self {
            mean: Some(mean),
            std: Some(std),
            n_defined: n,
        }
    }

    /// Mean and std, if the statistic was defined in all `repeats`.
    pub fn complete(&self, repeats: usize) -> Option<(f64, f64)> {
        match (self.mean, self.std) {
            (Some(m), Some(s)) if self.n_defined == repeats => Some((m, s)),
            _ => None,
        }
    }
}

/// Aggregates `values[i]` for every `i` with `defined[i]`.
///
/// # Panics
/// If the slices differ in length.
pub fn aggregate(values: &[f64], defined: &[bool]) -> Aggregate {
    assert_eq!(
        values.len(),
        defined.len(),
        "values and mask lengths differ"
    );
    Aggregate::from_options(values.iter().zip(defined).map(|(&v, &d)| d.then_some(v)))
}

/// Two-sided unequal-variance t-test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t_statistic: f64,
    pub degrees_of_freedom: f64,
    pub p_value: f64,
}

/// Welch's t-test with Welch–Satterthwaite degrees of freedom.
///
/// Two constant samples with equal means give `t = 0, p = 1` and
/// `n_a + n_b - 2` degrees of freedom. The p-value is floored at the
/// smallest positive normal `f64`.
pub fn welch_ttest(a: &[f64], b: &[f64]) -> Result<TTestResult> {
    let (na, nb) = (a.len(), b.len());
    if na < 2 || nb < 2 {
        return Err(Error::SampleTooSmall(na, nb));
    }
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let (sa, sb) = (va / na as f64, vb / nb as f64);
    let se2 = sa + sb;
    if se2 == 0.0 {
        return if ma == mb {
            Ok(TTestResult {
                t_statistic: 0.0,
                degrees_of_freedom: (na + nb - 2) as f64,
                p_value: 1.0,
            })
        } else {
            Err(Error::ZeroVariance)
        };
    }
    let t = (ma - mb) / math::sqrt(se2);
    let df = se2 * se2 / (sa * sa / (na - 1) as f64 + sb * sb / (nb - 1) as f64);
    Ok(TTestResult {
        t_statistic: t,
        degrees_of_freedom: df,
        p_value: student_t_two_sided_p(t, df),
    })
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, ss / (n - 1.0))
}

/// `P(|T| >= |t|)` for Student's t with `df` degrees of freedom, computed as
/// `I_{df/(df+t^2)}(df/2, 1/2)`.
pub fn student_t_two_sided_p(t: f64, df: f64) -> f64 {
    let t2 = t * t;
    let x = df / (df + t2);
    let y = t2 / (df + t2);
    incomplete_beta_pair(x, y, 0.5 * df, 0.5).max(f64::MIN_POSITIVE)
}

/// Regularized incomplete beta function `I_x(a, b)`.
///
/// # Panics
/// If `x` is outside `[0, 1]` or `a`, `b` are not positive.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    incomplete_beta_pair(x, 1.0 - x, a, b)
}

/// `I_x(a, b)` with `y = 1 - x` supplied separately so callers can avoid
/// cancellation near `x = 1`.
fn incomplete_beta_pair(x: f64, y: f64, a: f64, b: f64) -> f64 {
    assert!((0.0..=1.0).contains(&x), "x = {x} outside [0, 1]");
    assert!(a > 0.0 && b > 0.0, "shape parameters must be positive");
    if x == 0.0 {
        return 0.0;
    }
    if y == 0.0 {
        return 1.0;
    }
    let ln_front = a * math::ln(x) + b * math::ln(y) - ln_beta(a, b);
    // The continued fraction converges fast for x < (a + 1) / (a + b + 2);
    // otherwise use I_x(a, b) = 1 - I_{1-x}(b, a).
    if x < (a + 1.0) / (a + b + 2.0) {
        math::exp(ln_front) * beta_continued_fraction(x, a, b) / a
    } else {
        1.0 - math::exp(ln_front) * beta_continued_fraction(y, b, a) / b
    }
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    const MAX_TERMS: usize = 100_000;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_TERMS {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `ln Γ(x)` for `x > 0` (Lanczos approximation, g = 7, 9 terms).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    #[allow(clippy::excessive_precision)]
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
    if x < 0.5 {
        // Reflection: Γ(x) Γ(1 - x) = π / sin(πx).
        let pi = core::f64::consts::PI;
        return math::ln(pi / libm::sin(pi * x).abs()) - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut sum = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    LN_SQRT_2PI + (x + 0.5) * math::ln(t) - t + math::ln(sum)
}

/// Outcome of comparing two algorithms' per-repeat F1 scores.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Comparison {
    Tested(TTestResult),
    /// Defined everywhere but the test itself is undefined.
    Untestable {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairwiseComparison {
    pub first: ClassifierKind,
    pub second: ClassifierKind,
    #[serde(flatten)]
    pub comparison: Comparison,
}

/// Every unordered pair of algorithms whose scores are defined in every
/// repeat, in input order. Algorithms with any undefined score are listed
/// in `excluded` and take no part in the matrix.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PairwiseTests {
    pub algorithms: Vec<ClassifierKind>,
    pub excluded: Vec<ClassifierKind>,
    pub pairs: Vec<PairwiseComparison>,
}

impl PairwiseTests {
    /// Comparison of `a` against `b` (t negated when the pair is stored the
    /// other way round); `None` on the diagonal or for unknown algorithms.
    pub fn get(&self, a: ClassifierKind, b: ClassifierKind) -> Option<Comparison> {
        self.pairs.iter().find_map(|p| {
            if p.first == a && p.second == b {
                Some(p.comparison.clone())
            } else if p.first == b && p.second == a {
                Some(match &p.comparison {
                    Comparison::Tested(r) => Comparison::Tested(TTestResult {
                        t_statistic: -r.t_statistic,
                        ..*r
                    }),
                    other => other.clone(),
                })
            } else {
                None
            }
        })
    }
}

/// Welch test on every pair whose scores are defined in every repeat.
pub fn compare_all(per_algorithm: &[(ClassifierKind, Vec<Option<f64>>)]) -> PairwiseTests {
    let mut complete: Vec<(ClassifierKind, Vec<f64>)> = Vec::new();
    let mut excluded = Vec::new();
    for (kind, values) in per_algorithm {
        match values.iter().copied().collect::<Option<Vec<f64>>>() {
            Some(v) => complete.push((*kind, v)),
            None => excluded.push(*kind),
        }
    }
    let mut pairs = Vec::new();
    for (i, (first, a)) in complete.iter().enumerate() {
        for (second, b) in &complete[i + 1..] {
            let comparison = match welch_ttest(a, b) {
                Ok(r) => Comparison::Tested(r),
                Err(e) => Comparison::Untestable {
                    reason: e.to_string(),
                },
            };
            pairs.push(PairwiseComparison {
                first: *first,
                second: *second,
                comparison,
            });
        }
    }
    PairwiseTests {
        algorithms: complete.into_iter().map(|(k, _)| k).collect(),
        excluded,
        pairs,
    }
}
