//! Deterministic bit-level model of the two-user uplink.
//!
//! Rounding each receive SNR up to a power of two turns the Gaussian
//! channel into a pipe of `n = ceil(log2 snr)` noiseless bit levels. Both
//! transmit signals become binary vectors, the channel adds them after
//! shifting each down to its own level count, and everything below level
//! zero is lost. Designing the discrete constellations then reduces to
//! choosing binary generator matrices whose images stay separable when the
//! receiver treats the other user as noise.
//!
//! Throughout, the user with the larger channel gain is called *strong*;
//! its interfered-block message is the one that gets split across two
//! power bands so that the weak user's message can be tucked in between.
//! All public functions speak user coordinates (user 1, user 2) and map to
//! strong/weak internally.

use crate::error::Error;
use crate::gf2::{down_shift, BinaryMatrix};

/// Which of the two users enjoys the larger channel gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UserRole {
    User1,
    User2,
}

impl UserRole {
    pub fn other(self) -> UserRole {
        match self {
            UserRole::User1 => UserRole::User2,
            UserRole::User2 => UserRole::User1,
        }
    }
}

/// Message sizes, in bits per channel use, for the three sub-blocks: user
/// 1's whole block (`m1`), user 2's interfered sub-block (`m21`) and user
/// 2's interference-free sub-block (`m22`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModTuple {
    pub m1: u32,
    pub m21: u32,
    pub m22: u32,
}

impl ModTuple {
    pub fn new(m1: u32, m21: u32, m22: u32) -> Self {
        ModTuple { m1, m21, m22 }
    }
}

impl std::fmt::Display for ModTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.m1, self.m21, self.m22)
    }
}

/// Number of usable bit levels for a linear receive SNR: `ceil(log2 snr)`
/// clamped at zero.
pub fn bit_levels(snr: f64) -> Result<u32, Error> {
    if !(snr > 0.0) || !snr.is_finite() {
        return Err(Error::Domain(format!("snr must be positive and finite, got {snr}")));
    }
    let levels = snr.log2().ceil();
    Ok(if levels < 0.0 { 0 } else { levels as u32 })
}

/// A validated design point of the deterministic model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetModelParams {
    /// Bit levels of user 1 and user 2.
    pub n1: u32,
    pub n2: u32,
    /// Vector length of the interfered observation, `max(n1, n2)`.
    pub q: u32,
    pub m1: u32,
    pub m21: u32,
    pub m22: u32,
    /// Split of the strong user's interfered-block message: bits riding on
    /// the levels above the weak user, and bits on the levels below.
    pub strong_high_bits: u32,
    pub strong_low_bits: u32,
    pub strong_user: UserRole,
}

impl DetModelParams {
    /// Validates a message tuple against the admissible region and derives
    /// the two-band split of the strong user's interfered message.
    pub fn new(n1: u32, n2: u32, tuple: ModTuple, strong_user: UserRole) -> Result<Self, Error> {
        let (n_s, n_w) = match strong_user {
            UserRole::User1 => (n1, n2),
            UserRole::User2 => (n2, n1),
        };
        if n_s < n_w {
            return Err(Error::Config(format!(
                "strong user carries {n_s} bit levels but the weak user carries {n_w}; \
                 the construction needs the strong user's level count to dominate"
            )));
        }
        let (m_s, m_w) = match strong_user {
            UserRole::User1 => (tuple.m1, tuple.m21),
            UserRole::User2 => (tuple.m21, tuple.m1),
        };
        if m_s + m_w > n_s {
            return Err(Error::Infeasible(format!(
                "sum load {} + {} exceeds the {} shared bit levels",
                tuple.m1, tuple.m21, n_s
            )));
        }
        if m_w > n_w {
            return Err(Error::Infeasible(format!(
                "weak-user message {m_w} exceeds its {n_w} bit levels"
            )));
        }
        if tuple.m22 > n2 {
            return Err(Error::Infeasible(format!(
                "clean-block message {} exceeds user 2's {} bit levels",
                tuple.m22, n2
            )));
        }
        let strong_high_bits = ((m_s + m_w).saturating_sub(n_w)).min(n_s - n_w);
        let strong_low_bits = m_s.min(n_w - m_w);
        // Identity guaranteed by the region checks above.
        debug_assert_eq!(strong_high_bits + strong_low_bits, m_s);
        Ok(DetModelParams {
            n1,
            n2,
            q: n1.max(n2),
            m1: tuple.m1,
            m21: tuple.m21,
            m22: tuple.m22,
            strong_high_bits,
            strong_low_bits,
            strong_user,
        })
    }

    pub fn tuple(&self) -> ModTuple {
        ModTuple::new(self.m1, self.m21, self.m22)
    }

    /// Bit levels of the strong and weak user, in that order.
    pub fn levels_by_role(&self) -> (u32, u32) {
        match self.strong_user {
            UserRole::User1 => (self.n1, self.n2),
            UserRole::User2 => (self.n2, self.n1),
        }
    }

    /// Interfered-block message sizes of the strong and weak user.
    pub fn messages_by_role(&self) -> (u32, u32) {
        match self.strong_user {
            UserRole::User1 => (self.m1, self.m21),
            UserRole::User2 => (self.m21, self.m1),
        }
    }
}

/// All design points on the sum-level boundary: the strong user fills every
/// level the weak user leaves free, and the clean block is fully loaded.
pub fn boundary_tuples(n1: u32, n2: u32, strong_user: UserRole) -> Vec<ModTuple> {
    let (n_s, n_w) = match strong_user {
        UserRole::User1 => (n1, n2),
        UserRole::User2 => (n2, n1),
    };
    (0..=n_w)
        .map(|m_w| {
            let m_s = n_s - m_w;
            match strong_user {
                UserRole::User1 => ModTuple::new(m_s, m_w, n2),
                UserRole::User2 => ModTuple::new(m_w, m_s, n2),
            }
        })
        .collect()
}

/// Generator matrices `(g1, g21, g22)` for the three messages, in user
/// coordinates.
///
/// The strong user's interfered-block generator places its high-band bits
/// on the topmost levels and its low-band bits on the levels just below
/// the slot reserved for the weak user; the weak user's generator occupies
/// its own top levels. The clean-block generator is a plain level mapper.
pub fn build_generators(p: &DetModelParams) -> (BinaryMatrix, BinaryMatrix, BinaryMatrix) {
    let q = p.q as usize;
    let (n_s, n_w) = p.levels_by_role();
    let (m_s, m_w) = p.messages_by_role();
    let (n_s, n_w, m_s, m_w) = (n_s as usize, n_w as usize, m_s as usize, m_w as usize);
    let high = p.strong_high_bits as usize;
    let low = p.strong_low_bits as usize;

    // F blocks need only linearly independent rows; identity selections of
    // the first `high` and last `low` message bits are the simplest choice.
    let f_high = BinaryMatrix::identity(high).hstack(&BinaryMatrix::zeros(high, low));
    let f_low = BinaryMatrix::zeros(low, high).hstack(&BinaryMatrix::identity(low));
    let g_strong = f_high
        .vstack(&BinaryMatrix::zeros(n_s - n_w - high, m_s))
        .vstack(&BinaryMatrix::zeros(m_w, m_s))
        .vstack(&BinaryMatrix::zeros(n_w - m_w - low, m_s))
        .vstack(&f_low);
    debug_assert_eq!(g_strong.row_count(), q);

    let g_weak = BinaryMatrix::identity(m_w)
        .vstack(&BinaryMatrix::zeros(n_w - m_w, m_w))
        .vstack(&BinaryMatrix::zeros(n_s - n_w, m_w));
    debug_assert_eq!(g_weak.row_count(), q);

    let g22 = BinaryMatrix::identity(p.m22 as usize)
        .vstack(&BinaryMatrix::zeros((p.n2 - p.m22) as usize, p.m22 as usize));

    match p.strong_user {
        UserRole::User1 => (g_strong, g_weak, g22),
        UserRole::User2 => (g_weak, g_strong, g22),
    }
}

/// Mutual informations `(i1, i21, i22)` of the deterministic model when
/// each message is decoded with the other user's signal treated as noise.
///
/// For the interfered observation `y1 = S^(q-n1) g1 u1 + S^(q-n2) g21 u21`
/// the rate of one message is the rank of the joint generator minus the
/// rank of the interfering one; the clean block contributes its own rank.
pub fn det_tin_mi(p: &DetModelParams) -> (u32, u32, u32) {
    let (g1, g21, g22) = build_generators(p);
    let q = p.q as usize;
    let s1 = down_shift(q, q - p.n1 as usize).mul(&g1);
    let s21 = down_shift(q, q - p.n2 as usize).mul(&g21);
    let joint = s1.hstack(&s21).rank();
    let i1 = joint - s21.rank();
    let i21 = joint - s1.rank();
    let i22 = g22.rank();
    (i1 as u32, i21 as u32, i22 as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::collections::HashSet;

    fn rank_by_span(m: &BinaryMatrix) -> usize {
        let rows: Vec<u64> = (0..m.row_count())
            .map(|r| (0..m.col_count()).fold(0u64, |acc, c| acc | (u64::from(m.get(r, c)) << c)))
            .collect();
        assert!(rows.len() <= 16);
        let mut span = HashSet::new();
        for subset in 0u32..(1 << rows.len()) {
            let mut acc = 0u64;
            for (i, &row) in (0..).zip(rows.iter()) {
                if subset >> i & 1 == 1 {
                    acc ^= row;
                }
            }
            span.insert(acc);
        }
        span.len().trailing_zeros() as usize
    }

    #[test]
    fn bit_levels_rounds_up_and_clamps() {
        assert_eq!(bit_levels(10f64.powf(1.2)).unwrap(), 4);
        assert_eq!(bit_levels(10f64.powf(2.4)).unwrap(), 8);
        assert_eq!(bit_levels(16.0).unwrap(), 4);
        assert_eq!(bit_levels(0.5).unwrap(), 0);
        assert_eq!(bit_levels(1.0).unwrap(), 0);
        assert!(matches!(bit_levels(0.0), Err(Error::Domain(_))));
        assert!(matches!(bit_levels(-3.0), Err(Error::Domain(_))));
    }

    #[test]
    fn split_matches_hand_computed_values() {
        // Strong user 1 with (n1, n2, m1, m21) = (8, 4, 6, 2): four bits fit
        // above the weak user's levels and two below.
        let p = DetModelParams::new(8, 4, ModTuple::new(6, 2, 4), UserRole::User1).unwrap();
        assert_eq!((p.strong_high_bits, p.strong_low_bits), (4, 2));
        assert_eq!(p.q, 8);

        // Swapped roles: strong user 2 with (n1, n2) = (4, 8).
        let p = DetModelParams::new(4, 8, ModTuple::new(2, 6, 8), UserRole::User2).unwrap();
        assert_eq!((p.strong_high_bits, p.strong_low_bits), (4, 2));
    }

    #[test]
    fn region_violations_are_rejected() {
        // Sum load over the shared levels.
        assert!(matches!(
            DetModelParams::new(8, 4, ModTuple::new(7, 2, 4), UserRole::User1),
            Err(Error::Infeasible(_))
        ));
        // Weak-user message over its own levels.
        assert!(matches!(
            DetModelParams::new(8, 4, ModTuple::new(2, 5, 4), UserRole::User1),
            Err(Error::Infeasible(_))
        ));
        // Clean block over user 2's levels.
        assert!(matches!(
            DetModelParams::new(8, 4, ModTuple::new(2, 2, 5), UserRole::User1),
            Err(Error::Infeasible(_))
        ));
        // Role flag contradicting the level counts.
        assert!(matches!(
            DetModelParams::new(4, 8, ModTuple::new(2, 2, 2), UserRole::User1),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn generators_for_a_strong_user_1_point() {
        let p = DetModelParams::new(8, 4, ModTuple::new(6, 2, 4), UserRole::User1).unwrap();
        let (g1, g21, g22) = build_generators(&p);

        // g1 is 8x6 with identity(4) in the top rows (high band, first four
        // message bits) and identity(2) in the bottom rows (low band).
        assert_eq!((g1.row_count(), g1.col_count()), (8, 6));
        let mut expect = BinaryMatrix::zeros(8, 6);
        for i in 0..4 {
            expect.set(i, i, true);
        }
        expect.set(6, 4, true);
        expect.set(7, 5, true);
        assert_eq!(g1, expect);

        // g21 is 8x2 with identity(2) on top.
        assert_eq!((g21.row_count(), g21.col_count()), (8, 2));
        let mut expect = BinaryMatrix::zeros(8, 2);
        expect.set(0, 0, true);
        expect.set(1, 1, true);
        assert_eq!(g21, expect);

        assert_eq!((g22.row_count(), g22.col_count()), (4, 4));
        assert_eq!(g22, BinaryMatrix::identity(4));
    }

    #[test]
    fn generators_with_an_idle_user() {
        let p = DetModelParams::new(4, 4, ModTuple::new(0, 4, 4), UserRole::User1).unwrap();
        let (g1, g21, _) = build_generators(&p);
        assert_eq!((g1.row_count(), g1.col_count()), (4, 0));
        assert_eq!(g21, BinaryMatrix::identity(4));
    }

    #[test]
    fn tin_mi_recovers_the_full_message_sizes() {
        let p = DetModelParams::new(8, 4, ModTuple::new(6, 2, 4), UserRole::User1).unwrap();
        assert_eq!(det_tin_mi(&p), (6, 2, 4));

        // Cross-check the three ranks behind that triple with the span
        // oracle.
        let (g1, g21, _) = build_generators(&p);
        let s21 = down_shift(8, 4).mul(&g21);
        let joint = g1.hstack(&s21);
        assert_eq!(joint.rank(), rank_by_span(&joint));
        assert_eq!(s21.rank(), rank_by_span(&s21));
        assert_eq!(g1.rank(), rank_by_span(&g1));
    }

    #[test]
    fn tin_mi_is_lossless_across_a_small_exhaustive_region() {
        for n1 in 0..=6u32 {
            for n2 in 0..=6u32 {
                let strong = if n1 >= n2 { UserRole::User1 } else { UserRole::User2 };
                for m1 in 0..=n1 {
                    for m21 in 0..=n2 {
                        if m1 + m21 > n1.max(n2) {
                            continue;
                        }
                        for m22 in 0..=n2 {
                            let tuple = ModTuple::new(m1, m21, m22);
                            let p = DetModelParams::new(n1, n2, tuple, strong).unwrap();
                            assert_eq!(det_tin_mi(&p), (m1, m21, m22), "{n1},{n2},{tuple}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn swapping_roles_mirrors_the_triple() {
        let a = DetModelParams::new(8, 4, ModTuple::new(5, 3, 2), UserRole::User1).unwrap();
        let b = DetModelParams::new(4, 8, ModTuple::new(3, 5, 2), UserRole::User2).unwrap();
        let (a1, a21, _) = det_tin_mi(&a);
        let (b1, b21, _) = det_tin_mi(&b);
        assert_eq!((a1, a21), (b21, b1));
    }

    #[test]
    fn random_generators_generically_lose_rate() {
        // The construction is not an accident: random generator pairs of the
        // same shape usually collide in the shared levels and lose rank for
        // at least one message.
        let mut rng = StdRng::seed_from_u64(7);
        let mut violations = 0;
        for _ in 0..20 {
            let g1 = BinaryMatrix::from_rows((0..8).map(|_| rng.random::<u64>() & 0x3f).collect(), 6);
            let g21 = BinaryMatrix::from_rows((0..8).map(|_| rng.random::<u64>() & 0x3).collect(), 2);
            let s21 = down_shift(8, 4).mul(&g21);
            let joint = g1.hstack(&s21).rank();
            let i1 = joint - s21.rank();
            let i21 = joint - g1.rank();
            if i1 < 6 || i21 < 2 {
                violations += 1;
            }
        }
        assert!(violations > 0, "random generators never lost rate; suspicious");
    }

    #[test]
    fn boundary_tuples_fill_the_shared_levels() {
        let tuples = boundary_tuples(4, 8, UserRole::User2);
        assert_eq!(tuples.len(), 5);
        for t in &tuples {
            assert_eq!(t.m1 + t.m21, 8);
            assert_eq!(t.m22, 8);
            assert!(DetModelParams::new(4, 8, *t, UserRole::User2).is_ok());
        }
        assert!(tuples.contains(&ModTuple::new(0, 8, 8)));
        assert!(tuples.contains(&ModTuple::new(4, 4, 8)));
    }
}
