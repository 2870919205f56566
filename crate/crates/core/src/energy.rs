//! First-order radio model.
//!
//! Sending `b` bits over `d` meters costs `b * e_elec` for the electronics
//! plus an amplifier term `b * eps_fs * d^2` below the crossover distance
//! `d0 = sqrt(eps_fs / eps_mp)` and `b * eps_mp * d^4` at or above it.
//! Receiving costs the electronics term only. A cluster head fusing `k`
//! signals pays `k * b * e_da` and emits a single packet.
//!
//! The defaults are the values customary in LEACH-family studies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadioParams {
    /// Electronics energy per bit, TX and RX (J/bit).
    pub e_elec: f64,
    /// Free-space amplifier (J/bit/m^2).
    pub eps_fs: f64,
    /// Multipath amplifier (J/bit/m^4).
    pub eps_mp: f64,
    /// Aggregation energy (J/bit/signal).
    pub e_da: f64,
    pub data_bits: u64,
    pub ctrl_bits: u64,
    /// Initial battery per node (J).
    pub e_init: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        Self {
            e_elec: 50e-9,
            eps_fs: 10e-12,
            eps_mp: 0.0013e-12,
            e_da: 5e-9,
            data_bits: 4000,
            ctrl_bits: 200,
            e_init: 0.5,
        }
    }
}

impl RadioParams {
    /// Crossover distance between the free-space and multipath branches.
    pub fn crossover(&self) -> f64 {
        (self.eps_fs / self.eps_mp).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("radio.e_elec", self.e_elec),
            ("radio.eps_fs", self.eps_fs),
            ("radio.eps_mp", self.eps_mp),
            ("radio.e_da", self.e_da),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(key, format!("must be positive and finite, got {v}")));
            }
        }
        if self.data_bits == 0 {
            return Err(Error::config("radio.data_bits", "must be positive"));
        }
        if self.ctrl_bits == 0 {
            return Err(Error::config("radio.ctrl_bits", "must be positive"));
        }
        // zero initial energy is a legal degenerate scenario
        if !(self.e_init >= 0.0 && self.e_init.is_finite()) {
            return Err(Error::config(
                "radio.e_init",
                format!("must be finite and non-negative, got {}", self.e_init),
            ));
        }
        let d0 = self.crossover();
        if !(d0 > 0.0 && d0.is_finite()) {
            return Err(Error::config("radio.eps_mp", "crossover distance is not finite"));
        }
        Ok(())
    }
}

/// Energy to transmit `bits` over `d` meters.
pub fn tx_cost(bits: u64, d: f64, p: &RadioParams) -> Result<f64> {
    if d.is_nan() || d < 0.0 || d.is_infinite() {
        return Err(Error::InvalidArgument(format!(
            "transmit distance must be >= 0, got {d}"
        )));
    }
    let b = bits as f64;
    let amp = if d < p.crossover() {
        p.eps_fs * d * d
    } else {
        p.eps_mp * (d * d) * (d * d)
    };
    Ok(b * p.e_elec + b * amp)
}

pub fn rx_cost(bits: u64, p: &RadioParams) -> f64 {
    bits as f64 * p.e_elec
}

pub fn aggregate_cost(bits: u64, n_signals: usize, p: &RadioParams) -> f64 {
    n_signals as f64 * bits as f64 * p.e_da
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1e-300)
    }

    #[test]
    fn crossover_default() {
        let d0 = RadioParams::default().crossover();
        assert!((d0 - 87.7058).abs() < 1e-3, "{d0}");
    }

    #[test]
    fn hand_computed_costs() {
        let p = RadioParams::default();
        assert_eq!(tx_cost(0, 100.0, &p).unwrap(), 0.0);
        // 4000*50e-9 + 4000*10e-12*50^2
        assert!(close(tx_cost(4000, 50.0, &p).unwrap(), 3.0e-4));
        // 4000*50e-9 + 4000*1.3e-15*100^4
        assert!(close(tx_cost(4000, 100.0, &p).unwrap(), 7.2e-4));
        assert_eq!(rx_cost(0, &p), 0.0);
        assert!(close(rx_cost(4000, &p), 2.0e-4));
        assert_eq!(aggregate_cost(4000, 0, &p), 0.0);
        assert!(close(aggregate_cost(4000, 5, &p), 1.0e-4));
        assert!(close(aggregate_cost(4000, 10, &p), 2.0 * aggregate_cost(4000, 5, &p)));
    }

    #[test]
    fn negative_distance_rejected() {
        let p = RadioParams::default();
        assert!(matches!(tx_cost(10, -1.0, &p), Err(Error::InvalidArgument(_))));
        assert!(tx_cost(10, f64::NAN, &p).is_err());
    }

    #[test]
    fn continuous_at_crossover() {
        let p = RadioParams::default();
        let d0 = p.crossover();
        let eps = 1e-9 * d0;
        let lo = tx_cost(4000, d0 - eps, &p).unwrap();
        let hi = tx_cost(4000, d0 + eps, &p).unwrap();
        assert!((lo - hi).abs() / lo <= 1e-6);
    }

    #[test]
    fn validation_names_the_key() {
        let p = RadioParams {
            e_da: 0.0,
            ..Default::default()
        };
        match p.validate() {
            Err(Error::InvalidConfig { key, .. }) => assert_eq!(key, "radio.e_da"),
            other => panic!("{other:?}"),
        }
        let p = RadioParams {
            e_init: 0.0,
            ..Default::default()
        };
        assert!(p.validate().is_ok());
    }

    proptest! {
        #[test]
        fn costs_are_monotone(b1 in 0u64..10_000, b2 in 0u64..10_000, d1 in 0.0..300.0f64, d2 in 0.0..300.0f64) {
            let p = RadioParams::default();
            let (bl, bh) = (b1.min(b2), b1.max(b2));
            let (dl, dh) = (d1.min(d2), d1.max(d2));
            prop_assert!(tx_cost(bl, dl, &p).unwrap() <= tx_cost(bh, dl, &p).unwrap());
            prop_assert!(tx_cost(bh, dl, &p).unwrap() <= tx_cost(bh, dh, &p).unwrap());
            prop_assert!(tx_cost(bl, dl, &p).unwrap() >= 0.0);
            if bh > 0 && dl > 0.0 {
                prop_assert!(rx_cost(bh, &p) < tx_cost(bh, dl, &p).unwrap());
            }
        }
    }
}
