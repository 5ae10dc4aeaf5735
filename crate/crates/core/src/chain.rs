//! Sampling the layer set, ordering layers into a chain of invariant open
//! sets, checking openness empirically, and assembling the final report.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{roots, Functional, JordanHolderFlag};
use crate::scalar::{format_rational, int, parse_rational, Rational};
use crate::stratify::{classify, LayerLabel};

pub const UPPER_BOUND_DISCLAIMER: &str = "chain_length is an upper bound on minimal length";
pub const LOWER_BOUND_DISCLAIMER: &str = "layer set is a sampled lower bound";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplingConfig {
    /// Number of uniform random functionals.
    pub samples: usize,
    /// Numerators lie in `[−height, height]`, denominators in `[1, height]`.
    pub height: i64,
    pub seed: u64,
    pub probes: Vec<Functional>,
    pub max_witnesses: usize,
    /// The full `{−1, 0, 1}^m` grid is used when it has at most this many
    /// points; otherwise this many random grid points are drawn.
    pub grid_limit: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            samples: 2000,
            height: 10,
            seed: 0,
            probes: Vec::new(),
            max_witnesses: 4,
            grid_limit: 6561,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationConfig {
    /// Random directions per witness.
    pub directions: usize,
    /// Shrinking depths `1/2, …, 1/2^depth`.
    pub depth: u32,
    pub height: i64,
    pub seed: u64,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        Self {
            directions: 4,
            depth: 20,
            height: 5,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerEntry {
    pub witnesses: Vec<Functional>,
    pub sample_count: usize,
    pub orbit_dim: usize,
    pub is_character_layer: bool,
}

/// Every label seen while sampling. Never claimed complete.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LayerCatalog {
    pub layers: BTreeMap<LayerLabel, LayerEntry>,
    pub points_classified: usize,
}

impl LayerCatalog {
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &LayerLabel> {
        self.layers.keys()
    }

    fn insert(&mut self, label: LayerLabel, xi: Functional, max_witnesses: usize) {
        self.points_classified += 1;
        let entry = self.layers.entry(label.clone()).or_insert_with(|| LayerEntry {
            witnesses: Vec::new(),
            sample_count: 0,
            orbit_dim: label.orbit_dim(),
            is_character_layer: label.is_character(),
        });
        entry.sample_count += 1;
        if entry.witnesses.len() < max_witnesses && !entry.witnesses.contains(&xi) {
            entry.witnesses.push(xi);
        }
    }

    /// Union of two catalogs; witnesses of `self` come first.
    pub fn merge(&mut self, other: &LayerCatalog, max_witnesses: usize) {
        for (label, e) in &other.layers {
            let entry = self.layers.entry(label.clone()).or_insert_with(|| LayerEntry {
                witnesses: Vec::new(),
                sample_count: 0,
                orbit_dim: e.orbit_dim,
                is_character_layer: e.is_character_layer,
            });
            entry.sample_count += e.sample_count;
            for w in &e.witnesses {
                if entry.witnesses.len() < max_witnesses && !entry.witnesses.contains(w) {
                    entry.witnesses.push(w.clone());
                }
            }
        }
        self.points_classified += other.points_classified;
    }
}

pub fn random_rational(rng: &mut impl Rng, height: i64) -> Rational {
    let h = height.max(1);
    Rational::new(BigInt::from(rng.random_range(-h..=h)), BigInt::from(rng.random_range(1..=h)))
}

pub fn random_functional(rng: &mut impl Rng, m: usize, height: i64) -> Functional {
    Functional((0..m).map(|_| random_rational(rng, height)).collect())
}

fn random_direction(rng: &mut impl Rng, m: usize, height: i64) -> Functional {
    loop {
        let u = random_functional(rng, m, height);
        if !u.is_zero() {
            return u;
        }
    }
}

fn sign_grid(m: usize, limit: usize, rng: &mut impl Rng) -> Vec<Functional> {
    let full = u32::try_from(m).ok().and_then(|e| 3usize.checked_pow(e));
    match full {
        Some(n) if n <= limit => (0..n)
            .map(|mut code| {
                Functional(
                    (0..m)
                        .map(|_| {
                            let d = (code % 3) as i64 - 1;
                            code /= 3;
                            int(d)
                        })
                        .collect(),
                )
            })
            .collect(),
        _ => (0..limit)
            .map(|_| Functional((0..m).map(|_| int(rng.random_range(-1..=1))).collect()))
            .collect(),
    }
}

fn label_of(flag: &JordanHolderFlag, roots: &[Functional], xi: &Functional) -> Result<LayerLabel> {
    Ok(classify(flag, roots, xi.coords())?.layer_label())
}

/// Classifies probes, the sign grid, then random points (in that order) and
/// re-verifies every stored witness.
pub fn enumerate_layers(flag: &JordanHolderFlag, roots: &[Functional], config: &SamplingConfig) -> Result<LayerCatalog> {
    let m = flag.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut points: Vec<Functional> = Vec::new();
    for p in &config.probes {
        if p.dim() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: p.dim(),
            });
        }
        points.push(p.clone());
    }
    points.extend(sign_grid(m, config.grid_limit, &mut rng));
    points.extend((0..config.samples).map(|_| random_functional(&mut rng, m, config.height)));

    let labels: Vec<LayerLabel> = points
        .par_iter()
        .map(|xi| label_of(flag, roots, xi))
        .collect::<Result<_>>()?;
    let mut catalog = LayerCatalog::default();
    for (xi, label) in points.into_iter().zip(labels) {
        catalog.insert(label, xi, config.max_witnesses.max(1));
    }
    for (label, entry) in &catalog.layers {
        for w in &entry.witnesses {
            if &label_of(flag, roots, w)? != label {
                return Err(Error::InvariantViolation(format!("witness {w} changed label on reclassification")));
            }
        }
    }
    Ok(catalog)
}

/// Ascending `dim g(ξ)`, then descending `card b`, then the fine index,
/// then the remaining label fields.
pub fn order_layers(catalog: &LayerCatalog) -> Vec<(LayerLabel, LayerEntry)> {
    let mut layers: Vec<_> = catalog.layers.iter().map(|(l, e)| (l.clone(), e.clone())).collect();
    layers.sort_by(|(a, _), (b, _)| {
        a.fine
            .stabilizer_dim()
            .cmp(&b.fine.stabilizer_dim())
            .then(b.ultrafine.b.len().cmp(&a.ultrafine.b.len()))
            .then(a.fine.cmp(&b.fine))
            .then(a.ultrafine.e.cmp(&b.ultrafine.e))
            .then(a.ultrafine.jmap.cmp(&b.ultrafine.jmap))
            .then(a.ultrafine.b.cmp(&b.ultrafine.b))
    });
    layers
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpennessViolation {
    /// 1-based position of the witness's layer.
    pub layer: usize,
    pub witness: Functional,
    pub delta: Functional,
    pub from: LayerLabel,
    pub to: LayerLabel,
    /// Position of the perturbed label, absent if it was never sampled.
    pub to_layer: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpennessReport {
    pub checked: usize,
    pub violations: Vec<OpennessViolation>,
}

impl OpennessReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Perturbs every witness of layer `r` by `δ` with `‖δ‖∞ = 2^{−s}` along
/// random directions and requires the result to lie in some layer `s ≤ r`.
pub fn verify_openness(
    flag: &JordanHolderFlag,
    roots: &[Functional],
    ordered: &[(LayerLabel, LayerEntry)],
    config: &PerturbationConfig,
) -> Result<OpennessReport> {
    let m = flag.dim();
    let position: BTreeMap<&LayerLabel, usize> = ordered.iter().enumerate().map(|(r, (l, _))| (l, r + 1)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut jobs = Vec::new();
    for (r, (label, entry)) in ordered.iter().enumerate() {
        for w in &entry.witnesses {
            for _ in 0..config.directions {
                let u = random_direction(&mut rng, m, config.height);
                let norm = u.coords().iter().map(|x| x.abs()).max().expect("nonzero direction");
                for s in 1..=config.depth {
                    let scale = Rational::new(BigInt::from(1), BigInt::from(2).pow(s)) / norm.clone();
                    jobs.push((r + 1, label, w, u.scale(&scale)));
                }
            }
        }
    }
    let outcomes: Vec<Option<OpennessViolation>> = jobs
        .par_iter()
        .map(|(r, label, w, delta)| {
            let to = label_of(flag, roots, &w.add(delta))?;
            let to_layer = position.get(&to).copied();
            Ok(match to_layer {
                Some(s) if s <= *r => None,
                _ => Some(OpennessViolation {
                    layer: *r,
                    witness: (*w).clone(),
                    delta: delta.clone(),
                    from: (*label).clone(),
                    to,
                    to_layer,
                }),
            })
        })
        .collect::<Result<_>>()?;
    Ok(OpennessReport {
        checked: jobs.len(),
        violations: outcomes.into_iter().flatten().collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSummary {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub nilpotent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagSummary {
    /// Names of the flag vectors in terms of the defining basis.
    pub basis: Vec<String>,
    /// Rows are the flag vectors in defining coordinates.
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subquotient {
    pub gamma: String,
    pub fiber: String,
}

impl Subquotient {
    pub fn for_orbit_dim(orbit_dim: usize) -> Self {
        Self {
            gamma: "layer/G".into(),
            fiber: if orbit_dim > 0 {
                "K(H) infinite-dim".into()
            } else {
                "C (character)".into()
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerReport {
    pub label: LayerLabel,
    pub orbit_dim: usize,
    pub character: bool,
    pub sample_count: usize,
    pub witnesses: Vec<Functional>,
    pub subquotient: Subquotient,
}

/// The ordered chain `L_1, …, L_N`; serializes to the report document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub algebra: AlgebraSummary,
    pub flag: FlagSummary,
    pub roots: Vec<Functional>,
    pub layers: Vec<LayerReport>,
    pub chain_length: usize,
    pub openness: OpennessReport,
    pub disclaimers: Vec<String>,
}

impl ChainReport {
    pub fn flag_rows(&self) -> Result<Vec<Vec<Rational>>> {
        self.flag
            .matrix
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect())
            .collect()
    }
}

pub fn solvability_report(
    flag: &JordanHolderFlag,
    sampling: &SamplingConfig,
    perturbation: &PerturbationConfig,
) -> Result<ChainReport> {
    let alg = flag.algebra();
    let roots = roots(flag);
    let catalog = enumerate_layers(flag, &roots, sampling)?;
    let ordered = order_layers(&catalog);
    let openness = verify_openness(flag, &roots, &ordered, perturbation)?;
    let layers: Vec<LayerReport> = ordered
        .into_iter()
        .map(|(label, entry)| LayerReport {
            orbit_dim: entry.orbit_dim,
            character: entry.is_character_layer,
            sample_count: entry.sample_count,
            witnesses: entry.witnesses,
            subquotient: Subquotient::for_orbit_dim(entry.orbit_dim),
            label,
        })
        .collect();
    Ok(ChainReport {
        algebra: AlgebraSummary {
            name: alg.name().to_string(),
            dim: alg.dim(),
            basis: alg.basis_names().to_vec(),
            nilpotent: alg.is_nilpotent(),
        },
        flag: FlagSummary {
            basis: flag.basis_names().to_vec(),
            matrix: flag
                .basis_rows()
                .iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect(),
        },
        roots,
        chain_length: layers.len(),
        layers,
        openness,
        disclaimers: vec![UPPER_BOUND_DISCLAIMER.into(), LOWER_BOUND_DISCLAIMER.into()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lie::find_jh_flag;

    fn small() -> SamplingConfig {
        SamplingConfig {
            samples: 200,
            ..SamplingConfig::default()
        }
    }

    fn f(xs: &[i64]) -> Functional {
        Functional(xs.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn heisenberg_layers() {
        let flag = find_jh_flag(&catalog::heisenberg(1)).unwrap();
        let r = roots(&flag);
        let cat = enumerate_layers(&flag, &r, &small()).unwrap();
        let ks: Vec<Vec<usize>> = cat.labels().map(|l| l.fine.0.clone()).collect();
        assert_eq!(ks, vec![vec![1, 2, 1], vec![1, 2, 3]]);
        let ordered = order_layers(&cat);
        assert_eq!(ordered[0].0.ultrafine.e, vec![2, 3]);
        assert!(ordered[1].1.is_character_layer);
    }

    #[test]
    fn axb_layers() {
        let flag = find_jh_flag(&catalog::axb()).unwrap();
        let r = roots(&flag);
        let ordered = order_layers(&enumerate_layers(&flag, &r, &small()).unwrap());
        assert_eq!(ordered.len(), 2);
        assert_eq!(ordered[0].0.fine.0, vec![1, 0]);
        assert_eq!(ordered[0].0.ultrafine.b, vec![1]);
        assert_eq!(ordered[1].0.fine.0, vec![1, 2]);
    }

    #[test]
    fn abelian_is_one_layer() {
        let flag = find_jh_flag(&catalog::abelian(3)).unwrap();
        let r = roots(&flag);
        let cat = enumerate_layers(&flag, &r, &small()).unwrap();
        assert_eq!(cat.len(), 1);
        let ordered = order_layers(&cat);
        let rep = verify_openness(&flag, &r, &ordered, &PerturbationConfig::default()).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn character_witness_may_move_earlier() {
        let flag = find_jh_flag(&catalog::heisenberg(1)).unwrap();
        let r = roots(&flag);
        let mut cfg = small();
        // X* in flag coordinates (Z, Y, X)
        cfg.probes = vec![f(&[0, 0, 1]), f(&[1, 0, 0])];
        cfg.max_witnesses = 1;
        let ordered = order_layers(&enumerate_layers(&flag, &r, &cfg).unwrap());
        assert_eq!(ordered[1].1.witnesses, vec![f(&[0, 0, 1])]);
        let rep = verify_openness(&flag, &r, &ordered, &PerturbationConfig::default()).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.checked, 2 * 4 * 20);
    }

    #[test]
    fn misordered_chain_is_caught() {
        let flag = find_jh_flag(&catalog::heisenberg(1)).unwrap();
        let r = roots(&flag);
        let mut ordered = order_layers(&enumerate_layers(&flag, &r, &small()).unwrap());
        ordered.reverse();
        let rep = verify_openness(&flag, &r, &ordered, &PerturbationConfig::default()).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.violations[0].layer, 1);
    }

    #[test]
    fn report_is_deterministic() {
        let flag = find_jh_flag(&catalog::heisenberg(1)).unwrap();
        let a = solvability_report(&flag, &small(), &PerturbationConfig::default()).unwrap();
        let b = solvability_report(&flag, &small(), &PerturbationConfig::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.chain_length, 2);
        assert_eq!(a.layers[0].subquotient.fiber, "K(H) infinite-dim");
        assert_eq!(a.layers[1].subquotient.fiber, "C (character)");
    }
}
