//! Weight scaling: turns a pseudo-polynomial routine into a polynomial one at
//! the price of a `(1 + ε)` factor on its ratio.
//!
//! Scaling is exact. `λ = εθ/|V|` is kept as a rational and every scaled
//! weight is an integer ceiling (min-max) or floor (max-min) of `w(v)/λ`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::approx::{minmax_bcpk, BcpkResult, Certificate};
use crate::error::{contract, BcpError, Result};
use crate::graph::{Weight, WeightedGraph};
use crate::oracle::{exact_maxmin, EnumerationBudget};
use crate::partition::{Frac, Partition};

/// A strictly positive exact rational, parsed from `p/q`, an integer or a
/// decimal such as `0.125`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Epsilon(Frac);

impl Epsilon {
    pub fn new(numer: u128, denom: u128) -> Result<Self> {
        if denom == 0 || numer == 0 {
            return Err(BcpError::InvalidInput(format!(
                "epsilon must be a positive rational, got {numer}/{denom}"
            )));
        }
        Ok(Epsilon(Frac::new(numer, denom)))
    }

    pub fn value(&self) -> Frac {
        self.0
    }
}

impl FromStr for Epsilon {
    type Err = BcpError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || BcpError::InvalidInput(format!("cannot parse epsilon {s:?}"));
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: u128 = p.trim().parse().map_err(|_| bad())?;
            let q: u128 = q.trim().parse().map_err(|_| bad())?;
            return Epsilon::new(p, q);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if (int.is_empty() && frac.is_empty())
            || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
            || frac.len() > 30
        {
            return Err(bad());
        }
        let denom = 10u128.pow(frac.len() as u32);
        let int: u128 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac_val: u128 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let numer = int
            .checked_mul(denom)
            .and_then(|x| x.checked_add(frac_val))
            .ok_or_else(bad)?;
        Epsilon::new(numer, denom)
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `θ = max w`, `ŵ = ⌈w/λ⌉`.
    MinMax,
    /// `θ = min w`, `ŵ = ⌊w/λ⌋`.
    MaxMin,
}

#[derive(Debug, Clone)]
pub struct ScaledInstance {
    pub base: WeightedGraph,
    pub scaled: WeightedGraph,
    pub theta: Weight,
    pub lambda: Frac,
    pub epsilon: Epsilon,
    pub direction: Direction,
}

impl ScaledInstance {
    pub fn scaled_weights(&self) -> &[Weight] {
        self.scaled.weights()
    }

    /// `|V|²/ε + |V|`, the ceiling on `ŵ(G)` for min-max scaling.
    pub fn size_bound(&self) -> Frac {
        let n = self.base.n() as u128;
        Frac::from_integer(n * n) / self.epsilon.value() + Frac::from_integer(n)
    }
}

/// Scales the weights of `g` with `λ = ε·θ/|V|`.
pub fn scale(g: &WeightedGraph, eps: Epsilon, direction: Direction) -> Result<ScaledInstance> {
    let theta = match direction {
        Direction::MinMax => *g.weights().iter().max().unwrap(),
        Direction::MaxMin => *g.weights().iter().min().unwrap(),
    };
    let n = g.n() as u128;
    let lambda = eps.value() * Frac::from_integer(theta as u128) / Frac::from_integer(n);
    // w / λ = w · denom(λ) / numer(λ)
    let (ln, ld) = (*lambda.numer(), *lambda.denom());
    let mut scaled = Vec::with_capacity(g.n());
    for &w in g.weights() {
        let num = (w as u128)
            .checked_mul(ld)
            .ok_or_else(|| BcpError::InvalidInput("scaled weight overflows".into()))?;
        let q = match direction {
            Direction::MinMax => Integer::div_ceil(&num, &ln),
            Direction::MaxMin => num / ln,
        };
        if q == 0 {
            return Err(BcpError::InvalidInput(format!(
                "epsilon {eps} is too large for max-min scaling: a weight rounds to 0 (needs epsilon <= |V| = {n})"
            )));
        }
        scaled.push(
            Weight::try_from(q)
                .map_err(|_| BcpError::InvalidInput("scaled weight exceeds u64".into()))?,
        );
    }
    let scaled = g.with_weights(scaled)?;
    Ok(ScaledInstance {
        base: g.clone(),
        scaled,
        theta,
        lambda,
        epsilon: eps,
        direction,
    })
}

/// Any routine producing a connected `k`-partition of a weighted graph.
pub trait PartitionRoutine {
    fn partition(&self, g: &WeightedGraph, k: usize) -> Result<Partition>;
}

/// The Merge/Pull `k/2`-approximation.
#[derive(Debug, Clone, Copy, Default)]
pub struct MinMaxBcpk;

impl PartitionRoutine for MinMaxBcpk {
    fn partition(&self, g: &WeightedGraph, k: usize) -> Result<Partition> {
        Ok(minmax_bcpk(g, k)?.partition)
    }
}

/// Exhaustive max-min optimum; only usable on small graphs.
#[derive(Debug, Clone, Default)]
pub struct ExactMaxMin {
    pub budget: EnumerationBudget,
}

impl PartitionRoutine for ExactMaxMin {
    fn partition(&self, g: &WeightedGraph, k: usize) -> Result<Partition> {
        Ok(exact_maxmin(g, k, &self.budget)?.witness)
    }
}

/// Runs `routine` on the scaled instance and returns its partition measured
/// under the original weights.
pub fn solve_scaled<R: PartitionRoutine + ?Sized>(
    g: &WeightedGraph,
    k: usize,
    eps: Epsilon,
    direction: Direction,
    routine: &R,
) -> Result<(Partition, ScaledInstance)> {
    let inst = scale(g, eps, direction)?;
    let p = routine.partition(&inst.scaled, k)?;
    Ok((p.reweighted(g), inst))
}

#[derive(Debug, Clone)]
pub struct EpsResult {
    /// Classes weighed with the original weights.
    pub partition: Partition,
    /// Certificate of the run on the scaled instance.
    pub scaled_certificate: Certificate,
    pub instance: ScaledInstance,
    pub scaled_run: BcpkResult,
}

/// Polynomial `(k/2 + ε′)`-approximation for min-max connected k-partition.
pub fn eps_minmax_bcpk(g: &WeightedGraph, k: usize, eps_prime: Epsilon) -> Result<EpsResult> {
    if k < 3 || k > g.n() {
        return contract(format!("k must lie in 3..={}, got {k}", g.n()));
    }
    // ε = ε′ / (k/2)
    let e = eps_prime.value() * Frac::new(2, k as u128);
    let eps = Epsilon::new(*e.numer(), *e.denom())?;
    let instance = scale(g, eps, Direction::MinMax)?;
    let run = minmax_bcpk(&instance.scaled, k)?;
    Ok(EpsResult {
        partition: run.partition.reweighted(g),
        scaled_certificate: run.certificate.clone(),
        instance,
        scaled_run: run,
    })
}

/// Max-min scaling around any max-min routine.
pub fn eps_maxmin<R: PartitionRoutine + ?Sized>(
    g: &WeightedGraph,
    k: usize,
    eps: Epsilon,
    routine: &R,
) -> Result<Partition> {
    Ok(solve_scaled(g, k, eps, Direction::MaxMin, routine)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn four() -> WeightedGraph {
        WeightedGraph::new(vec![100, 40, 25, 13], [(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn parse_epsilon() {
        assert_eq!("1/2".parse::<Epsilon>().unwrap().value(), Frac::new(1, 2));
        assert_eq!("0.1".parse::<Epsilon>().unwrap().value(), Frac::new(1, 10));
        assert_eq!(".25".parse::<Epsilon>().unwrap().value(), Frac::new(1, 4));
        assert_eq!("2".parse::<Epsilon>().unwrap().value(), Frac::from_integer(2));
        assert!("0".parse::<Epsilon>().is_err());
        assert!("-1".parse::<Epsilon>().is_err());
        assert!("1/0".parse::<Epsilon>().is_err());
        assert!("abc".parse::<Epsilon>().is_err());
    }

    #[test]
    fn minmax_scaling_example() {
        let s = scale(&four(), "1/2".parse().unwrap(), Direction::MinMax).unwrap();
        assert_eq!(s.theta, 100);
        assert_eq!(s.lambda, Frac::new(25, 2));
        assert_eq!(s.scaled_weights(), &[8, 4, 2, 2]);
    }

    #[test]
    fn maxmin_scaling_example() {
        let s = scale(&four(), "1/2".parse().unwrap(), Direction::MaxMin).unwrap();
        assert_eq!(s.theta, 13);
        assert_eq!(s.lambda, Frac::new(13, 8));
        assert_eq!(s.scaled_weights(), &[61, 24, 15, 8]);
    }

    #[test]
    fn maxmin_rejects_large_epsilon() {
        assert!(scale(&four(), "4".parse().unwrap(), Direction::MaxMin).is_ok());
        assert!(scale(&four(), "9/2".parse().unwrap(), Direction::MaxMin).is_err());
    }

    #[test]
    fn unit_weights_scale_uniformly() {
        let g = path(5);
        let s = scale(&g, "1/3".parse().unwrap(), Direction::MinMax).unwrap();
        assert!(s.scaled_weights().iter().all(|&w| w == 15));
        let g = path(7);
        let s = scale(&g, "1/2".parse().unwrap(), Direction::MinMax).unwrap();
        assert!(s.scaled_weights().iter().all(|&w| w == 14));
        for k in 3..=7 {
            let direct = minmax_bcpk(&g, k).unwrap().partition;
            let scaled = eps_minmax_bcpk(&g, k, "1/2".parse().unwrap()).unwrap().partition;
            assert_eq!(direct.to_lists(), scaled.to_lists());
        }
    }

    #[test]
    fn eps_heavy_center() {
        let mut w = vec![1; 5];
        w[0] = 1_000_000;
        let g = star(4).with_weights(w).unwrap();
        let r = eps_minmax_bcpk(&g, 3, "1/2".parse().unwrap()).unwrap();
        assert_eq!(r.instance.scaled_weights(), &[15, 1, 1, 1, 1]);
        assert_eq!(r.partition.max_weight(), 1_000_002);
    }

    #[test]
    fn eps_rejects_small_k() {
        assert!(eps_minmax_bcpk(&path(5), 2, "1/2".parse().unwrap()).is_err());
    }
}
