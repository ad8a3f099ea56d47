use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constant-bit-rate traffic with infinite transmit buffers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrafficConfig {
    /// Offered load per transmitter (bit/s).
    pub cbr_rate: f64,
    /// Packet size (bits).
    pub packet_size: f64,
    /// Slot duration (s).
    pub slot_duration: f64,
    /// Packets a link can carry per slot. Only 1 is modeled.
    pub rate_per_slot: u32,
    /// Emulated time (s).
    pub emulation_time: f64,
    /// Every transmitter always has a packet, ignoring `cbr_rate`.
    pub saturated: bool,
}

impl Default for TrafficConfig {
    /// 384 Mbit/s of 5 kB packets over 100 us slots for one second.
    fn default() -> Self {
        Self {
            cbr_rate: 384e6,
            packet_size: 5_000.0 * 8.0,
            slot_duration: 100e-6,
            rate_per_slot: 1,
            emulation_time: 1.0,
            saturated: false,
        }
    }
}

impl TrafficConfig {
    pub fn saturated(slots: u64) -> Self {
        let base = Self::default();
        Self {
            saturated: true,
            emulation_time: slots as f64 * base.slot_duration,
            ..base
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("cbr_rate", self.cbr_rate),
            ("packet_size", self.packet_size),
            ("slot_duration", self.slot_duration),
            ("emulation_time", self.emulation_time),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(field, format!("must be > 0, got {v}")));
            }
        }
        if self.rate_per_slot != 1 {
            return Err(Error::invalid(
                "rate_per_slot",
                "only one packet per slot is modeled",
            ));
        }
        if self.slots() == 0 {
            return Err(Error::invalid("emulation_time", "shorter than one slot"));
        }
        Ok(())
    }

    pub fn slots(&self) -> u64 {
        (self.emulation_time / self.slot_duration).round() as u64
    }

    pub fn packets_per_second(&self) -> f64 {
        self.cbr_rate / self.packet_size
    }

    pub fn offered_per_slot(&self) -> f64 {
        self.packets_per_second() * self.slot_duration
    }

    /// Packets that arrive at one transmitter just before slot `slot`.
    pub fn arrivals_before(&self, slot: u64) -> u64 {
        if self.saturated {
            return 1;
        }
        let r = self.offered_per_slot();
        ((slot + 1) as f64 * r).floor() as u64 - (slot as f64 * r).floor() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_load_is_below_capacity() {
        let t = TrafficConfig::default();
        t.validate().unwrap();
        assert_eq!(t.slots(), 10_000);
        assert!((t.packets_per_second() - 9_600.0).abs() < 1e-9);
        assert!((t.offered_per_slot() - 0.96).abs() < 1e-12);
        let total: u64 = (0..t.slots()).map(|s| t.arrivals_before(s)).sum();
        assert_eq!(total, 9_600);
    }

    #[test]
    fn saturated_offers_one_per_slot() {
        let t = TrafficConfig::saturated(500);
        assert_eq!(t.slots(), 500);
        assert!((0..500).all(|s| t.arrivals_before(s) == 1));
    }

    #[test]
    fn invalid_configs() {
        let bad = TrafficConfig {
            emulation_time: 10e-6,
            ..TrafficConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = TrafficConfig {
            rate_per_slot: 2,
            ..TrafficConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
