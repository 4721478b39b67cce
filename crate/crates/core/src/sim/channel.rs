//! Simulated phone network between the robot and the user.

use chrono::{Duration, NaiveDateTime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "delivery", rename_all = "snake_case")]
pub enum Delivery {
    DeliveredAt {
        #[serde(rename = "delivered_at")]
        at: NaiveDateTime,
    },
    Dropped,
}

/// A lossy link with fixed latency.
///
/// The n-th message sent draws from ChaCha8 stream `n` of the channel seed,
/// so outcomes depend only on `(seed, n)` and survive a save/load cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WirelessChannel {
    latency_s: u64,
    drop_p: f64,
    seed: u64,
    sent: u64,
}

impl WirelessChannel {
    /// `drop_p` is clamped into `[0, 1]`.
    pub fn new(latency_s: u64, drop_p: f64, seed: u64) -> Self {
        let drop_p = if drop_p.is_nan() { 0.0 } else { drop_p.clamp(0.0, 1.0) };
        WirelessChannel {
            latency_s,
            drop_p,
            seed,
            sent: 0,
        }
    }

    pub fn latency_s(&self) -> u64 {
        self.latency_s
    }

    pub fn drop_p(&self) -> f64 {
        self.drop_p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sent(&self) -> u64 {
        self.sent
    }

    pub fn send(&mut self, now: NaiveDateTime) -> Delivery {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.sent);
        self.sent += 1;
        let draw: f64 = rng.random();
        if draw < self.drop_p {
            Delivery::Dropped
        } else {
            Delivery::DeliveredAt {
                at: now + Duration::seconds(self.latency_s as i64),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    fn now() -> NaiveDateTime {
        NaiveDate::from_ymd_opt(2010, 2, 17).unwrap().and_hms_opt(13, 19, 0).unwrap()
    }

    #[test]
    fn perfect_channel_always_delivers() {
        let mut ch = WirelessChannel::new(4, 0.0, 11);
        for _ in 0..200 {
            assert_eq!(
                ch.send(now()),
                Delivery::DeliveredAt { at: now() + Duration::seconds(4) }
            );
        }
    }

    #[test]
    fn dead_channel_always_drops() {
        let mut ch = WirelessChannel::new(4, 1.0, 11);
        assert!((0..200).all(|_| ch.send(now()) == Delivery::Dropped));
    }

    #[test]
    fn half_loss_is_reproducible() {
        let outcomes = |seed| {
            let mut ch = WirelessChannel::new(1, 0.5, seed);
            (0..64).map(|_| ch.send(now()) == Delivery::Dropped).collect::<Vec<_>>()
        };
        let a = outcomes(7);
        assert_eq!(a, outcomes(7));
        assert_ne!(a, outcomes(8));

        // regenerate independently from the seeded generator
        let expected: Vec<bool> = (0..64u64)
            .map(|n| {
                let mut rng = ChaCha8Rng::seed_from_u64(7);
                rng.set_stream(n);
                rng.random::<f64>() < 0.5
            })
            .collect();
        assert_eq!(a, expected);
        let dropped = a.iter().filter(|d| **d).count();
        assert!((16..=48).contains(&dropped), "{dropped}");
    }

    #[test]
    fn out_of_range_probability_is_clamped() {
        assert_eq!(WirelessChannel::new(0, 3.0, 0).drop_p(), 1.0);
        assert_eq!(WirelessChannel::new(0, -1.0, 0).drop_p(), 0.0);
    }
}
