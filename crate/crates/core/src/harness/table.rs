//! Embedded table of known optimal and near-optimal sequences.

use serde::{Deserialize, Serialize};

use crate::seqcore::{decode_hex, psl};

/// Optimal-PSL sequences for lengths 10 to 84 as `(n, hex, psl)`.
pub const OPTIMAL: &[(usize, &str, u32)] = &[
    (10, "37a", 3),
    (11, "712", 1),
    (12, "b3", 2),
    (13, "a60", 1),
    (14, "2a60", 2),
    (15, "3dba", 2),
    (16, "a447", 2),
    (17, "1c0a6", 2),
    (18, "2650f", 2),
    (19, "52447", 2),
    (20, "87b75", 2),
    (21, "129107", 2),
    (22, "14f668", 3),
    (23, "56ce01", 3),
    (24, "4a223c", 3),
    (25, "9b501c", 2),
    (26, "2e7e935", 3),
    (27, "24bb9f1", 3),
    (28, "e702a49", 2),
    (29, "10e2225b", 3),
    (30, "2a31240f", 3),
    (31, "2d079910", 3),
    (32, "2857d373", 3),
    (33, "16915cc18", 3),
    (34, "1a43808dd", 3),
    (35, "5569e0199", 3),
    (36, "87885776d", 3),
    (37, "10c1237a2b", 3),
    (38, "7caacc212", 3),
    (39, "29ca6c7c80", 3),
    (40, "22471e86fa", 3),
    (41, "7c64d77ade", 3),
    (42, "4447b874b4", 3),
    (43, "550e7f99b49", 3),
    (44, "cb4b8778888", 3),
    (45, "b6cab731e3f", 3),
    (46, "16959a2e3003", 3),
    (47, "69a7e851988", 3),
    (48, "e6e9bd5bc10f", 3),
    (49, "103f6eda6ae71", 4),
    (50, "31dceade9920f", 4),
    (51, "71c077376adb4", 3),
    (52, "600dc3cb4cd56", 4),
    (53, "1671848a940fcb", 4),
    (54, "2622a797806912", 4),
    (55, "6006a578ea6933", 4),
    (56, "61e4b3229420af", 4),
    (57, "143606103beca35", 4),
    (58, "215081f5644f2ce", 4),
    (59, "3b06774134bdf5e", 4),
    (60, "4df905215263a39", 4),
    (61, "193c99e12d6010aa", 4),
    (62, "25695564e679ff83", 4),
    (63, "707d54b9c99ef690", 4),
    (64, "d4ef33d372e082be", 4),
    (65, "1f75f6c8f84c6b50", 4),
    (66, "28a59401e57b1c993", 4),
    (67, "5ba4d417723078421", 4),
    (68, "d155a49d98c7bf7e1", 4),
    (69, "18ff3eb05d654b6665", 4),
    (70, "2b5aae6765e79b600f", 4),
    (71, "8cea0ff5e92cb9726", 4),
    (72, "dbcf036102615ab2a", 4),
    (73, "164da9aab5398f1ffe1", 4),
    (74, "8c9c6dab51e57580f", 4),
    (75, "5ff692ba8d62f1e3326", 4),
    (76, "87ad414fa9fcbb99a6c", 4),
    (77, "fe00861c0d932958aca", 4),
    (78, "328b457f0461e4ed7b73", 4),
    (79, "55fae4fdb42732de2ce2", 4),
    (80, "fe00a22a539352e3659e", 4),
    (81, "dc9df3ff085a6c3aae53", 4),
    (82, "2bf0fceee2499527bc61a", 4),
    (83, "7fc3af0a919735c4b2591", 5),
    (84, "fa87fce54c5e3d9964a49", 5),
];

/// Best known sequences for lengths 85 to 105, all with PSL 5. Lengths
/// 100 to 102 appear twice, as in the published listing.
pub const NEAR_OPTIMAL: &[(usize, &str, u32)] = &[
    (85, "1007b4a2f86ae1cc4cb36", 5),
    (86, "1378ae9166656250f0435f", 5),
    (87, "1850253c557b83626f3369", 5),
    (88, "2c43c8691299154d4fbf04", 5),
    (89, "17b237ec7daea0c1a7d8d4e", 5),
    (90, "7ca2b17db11f675bf5ad30", 5),
    (91, "3dffa15d0b98b16c5c65349", 5),
    (92, "4c9254743cf393b942217f", 5),
    (93, "1c9cdc87fdfa50e348aab25c", 5),
    (94, "3c144be5d296b3e65dc46600", 5),
    (95, "18d0d61707462bd427fedb24", 5),
    (96, "d02532058d9cf0d019e578aa", 5),
    (97, "1a542ff2c2ee6feb3b065186c", 5),
    (98, "1e61c02e1104b6ea5a981cdc9", 5),
    (99, "71cf7d0426a0646b20d8a972", 5),
    (100, "191f7308a8fc4fac34a902c90", 5),
    (101, "1ff41f8ee334912c6cdca8d28a", 5),
    (102, "40477758e393668697c0fd6ad", 5),
    (100, "255b559207e991908213c63e3", 5),
    (101, "1ff41f8ee334912c6cdca8d28a", 5),
    (102, "40477758e393668697c0fd6ad", 5),
    (103, "4fbcf31f8fe6d103ea8dacad48", 5),
    (104, "2e76361a08417ada07987744dd", 5),
    (105, "199bb906d3e822bc96a4110e1c7", 5),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownOptimalEntry {
    pub n: usize,
    pub hex: String,
    pub psl: u32,
}

impl KnownOptimalEntry {
    pub fn new(n: usize, hex: &str, psl: u32) -> Self {
        Self { n, hex: hex.to_string(), psl }
    }
}

fn entries(rows: &[(usize, &str, u32)]) -> Vec<KnownOptimalEntry> {
    rows.iter().map(|&(n, hex, p)| KnownOptimalEntry::new(n, hex, p)).collect()
}

pub fn optimal_entries() -> Vec<KnownOptimalEntry> {
    entries(OPTIMAL)
}

pub fn near_optimal_entries() -> Vec<KnownOptimalEntry> {
    entries(NEAR_OPTIMAL)
}

/// Every embedded entry, optimal rows first.
pub fn known_entries() -> Vec<KnownOptimalEntry> {
    let mut all = optimal_entries();
    all.extend(near_optimal_entries());
    all
}

/// Optimal PSL for `n` from the embedded table, if listed.
pub fn known_psl(n: usize) -> Option<u32> {
    OPTIMAL.iter().find(|row| row.0 == n).map(|row| row.2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryCheck {
    pub entry: KnownOptimalEntry,
    /// `None` when the hex failed to decode at the stated length.
    pub computed: Option<u32>,
    pub error: Option<String>,
}

impl EntryCheck {
    pub fn passed(&self) -> bool {
        self.computed == Some(self.entry.psl)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub checks: Vec<EntryCheck>,
}

impl TableReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(EntryCheck::passed)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &EntryCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

pub fn verify_entries(entries: &[KnownOptimalEntry]) -> TableReport {
    let checks = entries
        .iter()
        .map(|entry| match decode_hex(&entry.hex, entry.n) {
            Ok(b) => EntryCheck { entry: entry.clone(), computed: Some(psl(&b)), error: None },
            Err(e) => EntryCheck { entry: entry.clone(), computed: None, error: Some(e.to_string()) },
        })
        .collect();
    TableReport { checks }
}

/// Decodes every embedded entry and compares its PSL with the listed value.
pub fn verify_known_table() -> TableReport {
    verify_entries(&known_entries())
}
