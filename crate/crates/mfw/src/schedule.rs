//! Horizon schedules, momentum step sizes, and the measured update rule.
//!
//! The step `x <- x + (1/K) v ⊙ (1 - x)` damps movement in already-large
//! coordinates, keeping every iterate inside `[0,1)^n` and feasible whenever
//! the directions are. Schedules map a requested horizon `T` to the inner
//! iteration count `K`, block structure `(Q, L)`, and probe radius `delta`
//! for each algorithm variant, repairing divisibility when `T` does not
//! factor exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::DownClosedPolytope;

/// `x + (1/K) * v ⊙ (1 - x)`; requires `x, v` in the unit cube and `K >= 1`.
pub fn measured_step(x: &[f64], v: &[f64], k_total: usize) -> Result<Vec<f64>> {
    if k_total == 0 {
        return Err(Error::InvalidSchedule("measured step needs K >= 1".into()));
    }
    if v.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: v.len() });
    }
    let inv = 1.0 / k_total as f64;
    Ok(x.iter().zip(v).map(|(&xi, &vi)| xi + inv * vi * (1.0 - xi)).collect())
}

/// Momentum step size `2 / (k+3)^{2/3}`, `k >= 1`.
pub fn eta_meta(k: usize) -> f64 {
    debug_assert!(k >= 1);
    2.0 / ((k as f64) + 3.0).powf(2.0 / 3.0)
}

/// Two-phase momentum step size for the one-shot variant:
/// `2/(k+3)^{2/3}` up to `K/2 + 1`, then `1.5/(K-k+2)^{2/3}`. `K` must be
/// even so the phase boundary is integral.
pub fn eta_mono(k: usize, k_total: usize) -> Result<f64> {
    if k_total % 2 != 0 {
        return Err(Error::InvalidSchedule(format!(
            "two-phase step size needs even K (got {k_total})"
        )));
    }
    if !(1 <= k && k <= k_total) {
        return Err(Error::InvalidSchedule(format!("k = {k} outside 1..={k_total}")));
    }
    if k <= k_total / 2 + 1 {
        Ok(eta_meta(k))
    } else {
        Ok(1.5 / ((k_total - k) as f64 + 2.0).powf(2.0 / 3.0))
    }
}

/// Algorithm variants and their default inner-iteration budgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Full information, `K = ceil(T^{3/2})`. Expensive; gated in the harness.
    Meta32,
    /// Full information, `K = ceil(T^{3/4})` (default Meta budget).
    Meta34,
    /// One-shot blocking, `K ~ T^{3/5}`, `Q ~ T^{2/5}`, `T = QK`.
    Mono,
    /// Bandit blocking, `L ~ T^{7/9}`, `Q ~ T^{2/9}`, `K ~ T^{2/3}`, `T = LQ`.
    Bandit,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Meta32 => "meta32",
            Variant::Meta34 => "meta34",
            Variant::Mono => "mono",
            Variant::Bandit => "bandit",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "meta32" => Ok(Variant::Meta32),
            "meta34" => Ok(Variant::Meta34),
            "mono" => Ok(Variant::Mono),
            "bandit" => Ok(Variant::Bandit),
            other => Err(Error::InvalidConfig(format!(
                "unknown variant {other:?} (expected meta32|meta34|mono|bandit)"
            ))),
        }
    }
}

/// A resolved run plan: `horizon` rounds split into `blocks` blocks of
/// `block_len` rounds, with `inner_iters` measured steps per block.
/// Meta variants use one-round blocks; the requested horizon is kept.
/// Mono/Bandit may truncate to the nearest factorable horizon.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Schedule {
    pub variant: Variant,
    /// Effective horizon `T'` after divisibility repair.
    pub horizon: usize,
    /// Horizon originally requested.
    pub requested_horizon: usize,
    /// Inner iterations K (and gradient budget per block).
    pub inner_iters: usize,
    /// Number of blocks Q.
    pub blocks: usize,
    /// Rounds per block L (Meta: 1, Mono: K, Bandit: L).
    pub block_len: usize,
    /// One-point probe radius (bandit only; 0 otherwise).
    pub delta: f64,
}

impl Schedule {
    /// Builds the default schedule for `variant` at horizon `t`. The polytope
    /// supplies the inner radius for the bandit probe radius
    /// `delta = r / ((sqrt(n)+2) T^{1/9})`, clamped under the interior bound
    /// `r/(sqrt(n)+1)` when small horizons push the formula past it.
    pub fn plan(t: usize, variant: Variant, polytope: &DownClosedPolytope) -> Result<Schedule> {
        if t < 1 {
            return Err(Error::InvalidSchedule("horizon must be at least 1".into()));
        }
        let tf = t as f64;
        match variant {
            Variant::Meta32 | Variant::Meta34 => {
                let k = if variant == Variant::Meta32 {
                    tf.powf(1.5).ceil() as usize
                } else {
                    tf.powf(0.75).ceil() as usize
                };
                Ok(Schedule {
                    variant,
                    horizon: t,
                    requested_horizon: t,
                    inner_iters: k.max(1),
                    blocks: t,
                    block_len: 1,
                    delta: 0.0,
                })
            }
            Variant::Mono => {
                // Nearest even K to T^{3/5}; truncate to T' = K * floor(T/K).
                let raw = tf.powf(0.6);
                let mut k = 2 * ((raw / 2.0).round() as usize).max(1);
                if k > t {
                    k = 2 * (t / 2);
                }
                if k < 2 || k > t {
                    return Err(Error::InvalidSchedule(format!(
                        "horizon {t} cannot host an even block size; nearest valid horizon is 2"
                    )));
                }
                let q = t / k;
                Ok(Schedule {
                    variant,
                    horizon: q * k,
                    requested_horizon: t,
                    inner_iters: k,
                    blocks: q,
                    block_len: k,
                    delta: 0.0,
                })
            }
            Variant::Bandit => {
                let l = (tf.powf(7.0 / 9.0).round() as usize).clamp(2, t);
                let q = (t / l).max(1);
                let k_raw = tf.powf(2.0 / 3.0).ceil() as usize;
                let k = k_raw.min(l / 2).max(1);
                if l / 2 == 0 || l * q > t {
                    return Err(Error::InvalidSchedule(format!(
                        "horizon {t} too short for exploration blocks; nearest valid horizon is {}",
                        2 * q.max(1)
                    )));
                }
                let n = polytope.dim() as f64;
                let r = polytope.inner_radius();
                let formula = r / ((n.sqrt() + 2.0) * tf.powf(1.0 / 9.0));
                let bound = r / (n.sqrt() + 1.0);
                let delta = if formula < bound { formula } else { 0.99 * bound };
                Ok(Schedule {
                    variant,
                    horizon: l * q,
                    requested_horizon: t,
                    inner_iters: k,
                    blocks: q,
                    block_len: l,
                    delta,
                })
            }
        }
    }

    /// Overrides pieces of a planned schedule, re-validating the invariants.
    pub fn with_overrides(
        mut self,
        inner_iters: Option<usize>,
        blocks: Option<usize>,
        block_len: Option<usize>,
        delta: Option<f64>,
        polytope: &DownClosedPolytope,
    ) -> Result<Schedule> {
        if let Some(k) = inner_iters {
            self.inner_iters = k;
        }
        if let Some(q) = blocks {
            self.blocks = q;
        }
        if let Some(l) = block_len {
            self.block_len = l;
        }
        if let Some(d) = delta {
            self.delta = d;
        }
        match self.variant {
            Variant::Meta32 | Variant::Meta34 => {
                if self.block_len != 1 || self.inner_iters == 0 {
                    return Err(Error::InvalidSchedule(
                        "meta variants use one-round blocks and K >= 1".into(),
                    ));
                }
                self.horizon = self.blocks;
            }
            Variant::Mono => {
                if self.inner_iters == 0 || self.inner_iters % 2 != 0 {
                    return Err(Error::InvalidSchedule("one-shot blocks need even K".into()));
                }
                self.block_len = self.inner_iters;
                self.horizon = self.blocks * self.block_len;
            }
            Variant::Bandit => {
                if self.inner_iters == 0 || 2 * self.inner_iters > self.block_len {
                    return Err(Error::InvalidSchedule(
                        "bandit blocks need L >= 2K for the exploration phase".into(),
                    ));
                }
                let bound =
                    polytope.inner_radius() / ((polytope.dim() as f64).sqrt() + 1.0);
                if !(self.delta > 0.0 && self.delta < bound) {
                    return Err(Error::DeltaOutOfRange { delta: self.delta, bound });
                }
                self.horizon = self.blocks * self.block_len;
            }
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measured_step_arithmetic() {
        assert_eq!(measured_step(&[0.0, 0.0], &[1.0, 1.0], 2).unwrap(), vec![0.5, 0.5]);
        assert_eq!(measured_step(&[0.5, 0.5], &[1.0, 1.0], 2).unwrap(), vec![0.75, 0.75]);
        let x = measured_step(&[0.2, 0.4], &[1.0, 0.5], 4).unwrap();
        assert!((x[0] - 0.4).abs() < 1e-15);
        assert!((x[1] - 0.475).abs() < 1e-15);
        assert!(measured_step(&[0.0], &[1.0], 0).is_err());
    }

    #[test]
    fn measured_step_stays_in_cube_and_monotone() {
        use crate::rng::StreamRng;
        let mut rng = StreamRng::new(1);
        for _ in 0..200 {
            let k = 1 + rng.below(10);
            let mut x = vec![0.0; 4];
            for _ in 0..k {
                let v: Vec<f64> = (0..4).map(|_| rng.next_f64()).collect();
                let next = measured_step(&x, &v, k).unwrap();
                for i in 0..4 {
                    assert!(next[i] >= x[i] && next[i] <= 1.0);
                }
                x = next;
            }
        }
    }

    #[test]
    fn eta_meta_values() {
        assert!((eta_meta(1) - 0.7937005259840998).abs() < 1e-12);
        assert!((eta_meta(5) - 0.5).abs() < 1e-12);
        // Monotone decreasing toward zero.
        let mut prev = f64::INFINITY;
        for k in 1..200 {
            let e = eta_meta(k);
            assert!(e < prev && e > 0.0);
            prev = e;
        }
    }

    #[test]
    fn eta_mono_switches_phase() {
        assert!((eta_mono(1, 8).unwrap() - 0.7937005259840998).abs() < 1e-12);
        // k = K: 1.5 / 2^{2/3}.
        assert!((eta_mono(8, 8).unwrap() - 1.5 / 2.0f64.powf(2.0 / 3.0)).abs() < 1e-12);
        assert!((eta_mono(8, 8).unwrap() - 0.944940).abs() < 1e-6);
        // Boundary k = K/2+1 still uses the first branch.
        assert!((eta_mono(5, 8).unwrap() - 0.5).abs() < 1e-12);
        assert!(eta_mono(3, 7).is_err());
    }

    #[test]
    fn mono_schedule_repairs_divisibility() {
        let p = DownClosedPolytope::unit_box(2);
        // 32^{3/5} = 8 (floating point puts it a hair above); K = 8, Q = 4.
        let s = Schedule::plan(32, Variant::Mono, &p).unwrap();
        assert_eq!(s.inner_iters, 8);
        assert_eq!(s.blocks, 4);
        assert_eq!(s.horizon, 32);
        // T = 200: K = 24, Q = 8, T' = 192.
        let s = Schedule::plan(200, Variant::Mono, &p).unwrap();
        assert_eq!(s.inner_iters, 24);
        assert_eq!(s.blocks, 8);
        assert_eq!(s.horizon, 192);
        assert_eq!(s.requested_horizon, 200);
    }

    #[test]
    fn meta_schedules() {
        let p = DownClosedPolytope::unit_box(2);
        let s = Schedule::plan(16, Variant::Meta34, &p).unwrap();
        assert_eq!(s.inner_iters, 8);
        assert_eq!(s.horizon, 16);
        let s = Schedule::plan(200, Variant::Meta34, &p).unwrap();
        assert_eq!(s.inner_iters, 54); // ceil(200^{3/4})
        let s = Schedule::plan(4, Variant::Meta32, &p).unwrap();
        assert_eq!(s.inner_iters, 8); // 4^{3/2}
    }

    #[test]
    fn bandit_schedule_from_formulas() {
        let p = DownClosedPolytope::unit_box(2);
        let s = Schedule::plan(512, Variant::Bandit, &p).unwrap();
        assert_eq!(s.block_len, 128); // 512^{7/9}
        assert_eq!(s.blocks, 4);
        assert_eq!(s.horizon, 512);
        assert_eq!(s.inner_iters, 64); // ceil(512^{2/3}), within L/2
        let delta = 1.0 / ((2.0f64.sqrt() + 2.0) * 512.0f64.powf(1.0 / 9.0));
        assert!((s.delta - delta).abs() < 1e-12);
        assert!(s.delta < 1.0 / (2.0f64.sqrt() + 1.0));
        // Exploration fits: K <= L/2.
        assert!(2 * s.inner_iters <= s.block_len);
    }

    #[test]
    fn bandit_delta_clamps_for_tiny_horizons() {
        let p = DownClosedPolytope::unit_box(2);
        let s = Schedule::plan(2, Variant::Bandit, &p).unwrap();
        let bound = 1.0 / (2.0f64.sqrt() + 1.0);
        assert!(s.delta > 0.0 && s.delta < bound);
    }

    #[test]
    fn overrides_revalidate() {
        let p = DownClosedPolytope::unit_box(2);
        let s = Schedule::plan(100, Variant::Mono, &p).unwrap();
        assert!(s
            .clone()
            .with_overrides(Some(7), None, None, None, &p)
            .is_err());
        let s2 = s.with_overrides(Some(10), Some(5), None, None, &p).unwrap();
        assert_eq!(s2.horizon, 50);
    }
}
