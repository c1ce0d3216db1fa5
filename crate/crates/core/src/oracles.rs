//! Closed-form coherence and entanglement predictions for every channel.
//!
//! With `q = 1 − p`, `s = √(pq)` and `C = √(r1² + r2²)` the initial qubit
//! coherence, the flip channels share the phase-damping total coherence
//! `(1 + 2s)C + 2s`; the bit-phase flip follows from the bit flip by
//! exchanging `r1 ↔ r2`, the phase flip environment coherence and
//! concurrence from the bit flip ones by exchanging `r1 ↔ r3`.

use crate::channels::ChannelKind;
use crate::error::{Error, Result};
use crate::states::BlochVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionRecord {
    pub kind: ChannelKind,
    pub p: f64,
    pub c_total: f64,
    pub c_system: f64,
    pub c_environment: f64,
    pub c_nonlocal: f64,
    /// Concurrence where a closed form exists (ADC and the flip channels).
    pub entanglement: Option<f64>,
    pub gap_defined: bool,
}

impl PredictionRecord {
    pub fn c_local(&self) -> f64 {
        self.c_system + self.c_environment
    }

    /// `C_nl − E_c` where the entanglement is known in closed form.
    pub fn gap(&self) -> Option<f64> {
        self.entanglement.map(|e| self.c_nonlocal - e)
    }
}

fn record(
    kind: ChannelKind,
    p: f64,
    c_total: f64,
    c_system: f64,
    c_environment: f64,
    c_nonlocal: f64,
    entanglement: Option<f64>,
) -> PredictionRecord {
    PredictionRecord {
        kind,
        p,
        c_total,
        c_system,
        c_environment,
        c_nonlocal,
        entanglement,
        gap_defined: entanglement.is_some(),
    }
}

/// `2√(pq)·min(√x, √y)` with `x = b² + c²`, `y = 1 − a²`; the bit flip uses
/// `(a, b, c) = (r1, r2, r3)`.
fn flip_concurrence(s: f64, a: f64, b: f64, c: f64) -> f64 {
    let x = b * b + c * c;
    let y = (1.0 - a * a).max(0.0);
    2.0 * s * x.sqrt().min(y.sqrt())
}

/// Bit-flip record for the (possibly relabelled) components `(a, b, c)`.
fn bit_flip(kind: ChannelKind, p: f64, a: f64, b: f64, c: f64) -> PredictionRecord {
    let q = 1.0 - p;
    let s = (p * q).sqrt();
    let c0 = a.hypot(b);
    let total = (1.0 + 2.0 * s) * c0 + 2.0 * s;
    let system = (a * a + b * b * (1.0 - 2.0 * p).powi(2)).sqrt();
    let environment = 2.0 * s * a.abs();
    let nonlocal = (1.0 + 2.0 * s) * c0 - system + 2.0 * s * (1.0 - a.abs());
    record(
        kind,
        p,
        total,
        system,
        environment,
        nonlocal,
        Some(flip_concurrence(s, a, b, c)),
    )
}

/// Closed-form coherences (and concurrence, where available) of the joint
/// state reached from `r` at parametrized time `p`.
pub fn predict(kind: ChannelKind, r: BlochVector, p: f64) -> Result<PredictionRecord> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::POutOfRange(p));
    }
    let q = 1.0 - p;
    let s = (p * q).sqrt();
    let c0 = r.coherence();
    let rec = match kind {
        ChannelKind::Adc => {
            let nonlocal = s * (1.0 - r.r3);
            let total = (q.sqrt() + p.sqrt()) * c0 + nonlocal;
            record(
                kind,
                p,
                total,
                q.sqrt() * c0,
                p.sqrt() * c0,
                nonlocal,
                Some(nonlocal),
            )
        }
        ChannelKind::Pdc => {
            let total = (1.0 + 2.0 * s) * c0 + 2.0 * s;
            let nonlocal = (p + 2.0 * s) * c0;
            record(kind, p, total, q * c0, 2.0 * s, nonlocal, None)
        }
        ChannelKind::Bfc => bit_flip(kind, p, r.r1, r.r2, r.r3),
        ChannelKind::Bpfc => bit_flip(kind, p, r.r2, r.r1, r.r3),
        ChannelKind::Pfc => {
            let total = (1.0 + 2.0 * s) * c0 + 2.0 * s;
            let kink = (1.0 - 2.0 * p).abs();
            let system = kink * c0;
            let environment = 2.0 * s * r.r3.abs();
            let nonlocal = (1.0 + 2.0 * s - kink) * c0 + 2.0 * s * (1.0 - r.r3.abs());
            let ent = flip_concurrence(s, r.r3, r.r2, r.r1);
            record(kind, p, total, system, environment, nonlocal, Some(ent))
        }
        ChannelKind::Dc => {
            let u = p / 4.0;
            let v = 1.0 - 3.0 * u;
            let w = (u * v).sqrt() + u;
            let amp = (3.0 * u.sqrt() + v.sqrt()).powi(2);
            let total = amp * c0 + 6.0 * w;
            let environment = 2.0 * w * r.abs_sum();
            let nonlocal = (amp - q) * c0 + 2.0 * w * (3.0 - r.abs_sum());
            record(kind, p, total, q * c0, environment, nonlocal, None)
        }
    };
    Ok(rec)
}

/// Coefficients of the PDC partial-transpose quartic
/// `λ⁴ − λ³ + c2 λ² + c1 λ + c0` (the remaining factor of its
/// characteristic polynomial is `λ²`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdcQuartic {
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl PdcQuartic {
    pub fn eval(&self, lambda: f64) -> f64 {
        let l2 = lambda * lambda;
        l2 * l2 - l2 * lambda + self.c2 * l2 + self.c1 * lambda + self.c0
    }

    /// Multiplicity of `λ = 0` as a root of the quartic.
    pub fn zero_root_multiplicity(&self) -> usize {
        if self.c0 != 0.0 {
            0
        } else if self.c1 != 0.0 {
            1
        } else if self.c2 != 0.0 {
            2
        } else {
            3
        }
    }
}

pub fn pdc_negativity_coeffs(r: BlochVector, p: f64) -> PdcQuartic {
    let transverse = r.r1 * r.r1 + r.r2 * r.r2;
    let pp = p * (2.0 - p);
    PdcQuartic {
        c2: 0.25 * (1.0 - transverse - r.r3 * r.r3),
        c1: 0.25 * pp * transverse,
        c0: pp * pp * transverse * (r.r3 * r.r3 - 1.0) / 16.0,
    }
}
