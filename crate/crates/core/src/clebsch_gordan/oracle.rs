//! Floating-point Clebsch–Gordan coefficients built from the angular
//! momentum algebra alone, as a cross-check on the closed-form evaluation.
//!
//! For each total `J` from `j1 + j2` down to `|j1 − j2|` the top state
//! `|J, J⟩` is either the stretched product state or the unit vector of the
//! `M = J` subspace orthogonal to every higher-`J` state, signed so that its
//! `m1 = j1` component is positive. Lower states follow from
//! `J₋|J,M⟩ = √(J(J+1) − M(M−1)) |J,M−1⟩` with `J₋ = J₋⁽¹⁾ + J₋⁽²⁾`.

use std::collections::HashMap;

use super::{validate_projections, HalfInt};
use crate::Result;

/// All coupled states of `j1 ⊗ j2` in the product basis.
#[derive(Debug, Clone)]
pub struct OracleTable {
    tj1: i64,
    tj2: i64,
    /// `(2J, 2M)` → coefficients indexed by `i1 * (2j2+1) + i2`,
    /// with `2m1 = 2j1 − 2·i1` and `2m2 = 2j2 − 2·i2`.
    states: HashMap<(i64, i64), Vec<f64>>,
}

/// `√(j(j+1) − m(m−1))` from twice-values.
fn lowering_factor(tj: i64, tm: i64) -> f64 {
    (((tj * (tj + 2)) - (tm * (tm - 2))) as f64 / 4.0).sqrt()
}

impl OracleTable {
    pub fn new(j1: HalfInt, j2: HalfInt) -> Self {
        let (tj1, tj2) = (j1.twice(), j2.twice());
        assert!(tj1 >= 0 && tj2 >= 0, "spins must be nonnegative");
        let d2 = (tj2 + 1) as usize;
        let dim = (tj1 + 1) as usize * d2;
        let index = |tm1: i64, tm2: i64| ((tj1 - tm1) / 2) as usize * d2 + ((tj2 - tm2) / 2) as usize;

        let mut states: HashMap<(i64, i64), Vec<f64>> = HashMap::new();
        let mut tj = tj1 + tj2;
        while tj >= (tj1 - tj2).abs() {
            let top = if tj == tj1 + tj2 {
                let mut v = vec![0.0; dim];
                v[0] = 1.0;
                v
            } else {
                let higher: Vec<&Vec<f64>> = states
                    .iter()
                    .filter(|((j, m), _)| *j > tj && *m == tj)
                    .map(|(_, v)| v)
                    .collect();
                let mut best: Option<Vec<f64>> = None;
                let mut best_norm = 0.0;
                let mut tm1 = tj1;
                while tm1 >= -tj1 {
                    let tm2 = tj - tm1;
                    if tm2.abs() <= tj2 {
                        let mut v = vec![0.0; dim];
                        v[index(tm1, tm2)] = 1.0;
                        for s in &higher {
                            let overlap: f64 = s.iter().zip(&v).map(|(a, b)| a * b).sum();
                            v.iter_mut().zip(s.iter()).for_each(|(x, y)| *x -= overlap * y);
                        }
                        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                        if norm > best_norm {
                            best_norm = norm;
                            best = Some(v);
                        }
                    }
                    tm1 -= 2;
                }
                let mut v = best.expect("M = J subspace has a free direction");
                // Condon–Shortley: ⟨j1 j1; j2 (J−j1) | J J⟩ > 0
                let lead = v[index(tj1, tj - tj1)];
                let scale = lead.signum() / best_norm;
                v.iter_mut().for_each(|x| *x *= scale);
                v
            };

            let mut current = top;
            let mut tm = tj;
            loop {
                states.insert((tj, tm), current.clone());
                if tm == -tj {
                    break;
                }
                let mut lowered = vec![0.0; dim];
                for (i, &c) in current.iter().enumerate() {
                    if c == 0.0 {
                        continue;
                    }
                    let tm1 = tj1 - 2 * (i / d2) as i64;
                    let tm2 = tj2 - 2 * (i % d2) as i64;
                    if tm1 > -tj1 {
                        lowered[index(tm1 - 2, tm2)] += c * lowering_factor(tj1, tm1);
                    }
                    if tm2 > -tj2 {
                        lowered[index(tm1, tm2 - 2)] += c * lowering_factor(tj2, tm2);
                    }
                }
                let norm = lowering_factor(tj, tm);
                lowered.iter_mut().for_each(|x| *x /= norm);
                current = lowered;
                tm -= 2;
            }
            tj -= 2;
        }
        OracleTable { tj1, tj2, states }
    }

    /// `⟨j1 m1 j2 m2 | j m⟩`; zero outside the coupled range.
    pub fn get(&self, m1: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> f64 {
        let (tm1, tm2) = (m1.twice(), m2.twice());
        if tm1.abs() > self.tj1 || tm2.abs() > self.tj2 || tm1 + tm2 != m.twice() {
            return 0.0;
        }
        match self.states.get(&(j.twice(), m.twice())) {
            Some(v) => {
                let d2 = (self.tj2 + 1) as usize;
                v[((self.tj1 - tm1) / 2) as usize * d2 + ((self.tj2 - tm2) / 2) as usize]
            }
            None => 0.0,
        }
    }
}

/// Independent float evaluation of `⟨j1 m1 j2 m2 | j m⟩`.
pub fn cg_oracle(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<f64> {
    validate_projections(&[(j1, m1), (j2, m2), (j, m)])?;
    Ok(OracleTable::new(j1, j2).get(m1, m2, j, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn singlet_and_triplet() {
        let t = OracleTable::new(h(1), h(1));
        assert!((t.get(h(1), h(-1), h(0), h(0)) - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((t.get(h(-1), h(1), h(0), h(0)) + FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((t.get(h(1), h(-1), h(2), h(0)) - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(t.get(h(1), h(1), h(2), h(2)), 1.0);
    }

    #[test]
    fn stretched_and_forbidden() {
        assert_eq!(cg_oracle(h(3), h(3), h(2), h(2), h(5), h(5)).unwrap(), 1.0);
        // j = 3 violates the triangle rule for 1 ⊗ 1
        assert_eq!(cg_oracle(h(2), h(2), h(2), h(2), h(6), h(4)).unwrap(), 0.0);
        assert!(cg_oracle(h(1), h(3), h(1), h(1), h(2), h(4)).is_err());
    }

    #[test]
    fn states_are_orthonormal() {
        let t = OracleTable::new(h(3), h(2));
        let keys: Vec<_> = t.states.keys().copied().collect();
        for a in &keys {
            for b in &keys {
                let dot: f64 = t.states[a].iter().zip(&t.states[b]).map(|(x, y)| x * y).sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-12, "{a:?} {b:?} {dot}");
            }
        }
    }
}
