//! Chain geometry, classical configurations, and the neighbour-gated flip terms.
//!
//! Sites are numbered 1..=L. The two outermost sites on each end (1, 2, L-1, L)
//! never carry a flip term — they act as a frozen boundary — but their
//! occupations still count toward the neighbourhoods of interior sites.
//! A flip term lives on each interior site i in 3..=L-2 and is gated by the
//! four neighbours i-2, i-1, i+1, i+2: the flip acts only on components where
//! exactly two or three of those neighbours are alive.

use crate::error::{Error, Result};

/// Smallest chain that has any interior flip site at all.
pub const MIN_SITES: usize = 5;

/// Chain geometry with the frozen-edge boundary convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeSpec {
    sites: usize,
}

impl LatticeSpec {
    /// A chain of `sites` sites. Fails below [`MIN_SITES`].
    pub fn new(sites: usize) -> Result<Self> {
        if sites < MIN_SITES {
            return Err(Error::LatticeTooSmall {
                got: sites,
                min: MIN_SITES,
            });
        }
        Ok(Self { sites })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    /// First site carrying a flip term.
    pub fn first_flip_site(&self) -> usize {
        3
    }

    /// Last site carrying a flip term.
    pub fn last_flip_site(&self) -> usize {
        self.sites - 2
    }

    /// Number of flip terms (L - 4).
    pub fn term_count(&self) -> usize {
        self.sites - 4
    }
}

/// One Hamiltonian term: a spin flip on `flip_site`, gated by its four
/// neighbours. `flip_site` is 1-based and interior (3..=L-2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HamTerm {
    flip_site: usize,
}

impl HamTerm {
    /// Term flipping `flip_site` on `lattice`. Fails outside the interior range.
    pub fn new(lattice: LatticeSpec, flip_site: usize) -> Result<Self> {
        if flip_site < lattice.first_flip_site() || flip_site > lattice.last_flip_site() {
            return Err(Error::FlipSiteOutOfRange {
                site: flip_site,
                max: lattice.last_flip_site(),
                sites: lattice.sites(),
            });
        }
        Ok(Self { flip_site })
    }

    pub fn flip_site(&self) -> usize {
        self.flip_site
    }

    /// The four gating neighbours, in ascending site order.
    pub fn neighbors(&self) -> [usize; 4] {
        neighbor_indices(self.flip_site)
    }
}

/// Sites gating a flip on `site`: i-2, i-1, i+1, i+2.
///
/// Callers must pass an interior site (`site >= 3`), otherwise the lower
/// neighbours would fall off the chain.
pub fn neighbor_indices(site: usize) -> [usize; 4] {
    debug_assert!(site >= 3);
    [site - 2, site - 1, site + 1, site + 2]
}

/// A classical occupation pattern: one bit per site.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassicalConfig {
    bits: Vec<u8>,
}

impl ClassicalConfig {
    /// Wraps a bit vector, rejecting anything but 0/1 entries.
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidBitValue(bad));
        }
        Ok(Self { bits })
    }

    /// Parses a string like `"0110"` (site 1 first).
    pub fn from_bit_string(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidBitChar(other)),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self { bits })
    }

    pub fn all_dead(sites: usize) -> Self {
        Self {
            bits: vec![0; sites],
        }
    }

    pub fn all_alive(sites: usize) -> Self {
        Self {
            bits: vec![1; sites],
        }
    }

    /// Number of sites.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Occupation of 1-based `site`.
    pub fn bit(&self, site: usize) -> u8 {
        self.bits[site - 1]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|b| char::from(b'0' + b)).collect()
    }

    pub fn alive_count(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    /// Mirror image: site i maps to site L+1-i.
    pub fn reflected(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.reverse();
        Self { bits }
    }

    /// Basis index with site 1 as the least significant bit.
    pub fn to_basis_index(&self) -> usize {
        self.bits
            .iter()
            .enumerate()
            .map(|(k, &b)| (b as usize) << k)
            .sum()
    }

    /// Inverse of [`to_basis_index`](Self::to_basis_index) for a chain of `sites` sites.
    pub fn from_basis_index(index: usize, sites: usize) -> Self {
        let bits = (0..sites).map(|k| ((index >> k) & 1) as u8).collect();
        Self { bits }
    }
}

/// Number of live sites among the four neighbours of `site` in `config`.
///
/// `site` must be interior (3..=L-2) so that all four neighbours exist.
pub fn neighbor_live_count(config: &ClassicalConfig, site: usize) -> u8 {
    neighbor_indices(site)
        .into_iter()
        .map(|n| config.bit(n))
        .sum()
}

/// Whether the flip on `site` is enabled in `config`: exactly two or three
/// of the four neighbours are alive.
pub fn is_active(config: &ClassicalConfig, site: usize) -> bool {
    matches!(neighbor_live_count(config, site), 2 | 3)
}

/// All flip terms of `lattice`, in ascending site order.
pub fn build_terms(lattice: LatticeSpec) -> Vec<HamTerm> {
    (lattice.first_flip_site()..=lattice.last_flip_site())
        .map(|flip_site| HamTerm { flip_site })
        .collect()
}

/// Splits terms into three groups by flip site mod 3.
///
/// Terms whose flip sites differ by at least 3 have disjoint flip/neighbour
/// supports in the only place that matters — no term's flip site lies in
/// another's window — so all terms within one group commute exactly. The
/// split-step integrators exponentiate one group at a time.
pub fn sublattice_partition(terms: &[HamTerm]) -> [Vec<HamTerm>; 3] {
    let mut groups: [Vec<HamTerm>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for &term in terms {
        groups[term.flip_site % 3].push(term);
    }
    for group in &mut groups {
        group.sort_by_key(|t| t.flip_site);
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_rejects_short_chains() {
        for sites in 0..MIN_SITES {
            assert!(LatticeSpec::new(sites).is_err());
        }
        assert!(LatticeSpec::new(MIN_SITES).is_ok());
    }

    #[test]
    fn term_count_is_sites_minus_four() {
        for sites in [5, 6, 9, 32, 1024] {
            let lattice = LatticeSpec::new(sites).unwrap();
            let terms = build_terms(lattice);
            assert_eq!(terms.len(), sites - 4);
            assert_eq!(terms.first().unwrap().flip_site(), 3);
            assert_eq!(terms.last().unwrap().flip_site(), sites - 2);
        }
    }

    #[test]
    fn five_site_chain_has_single_term() {
        let lattice = LatticeSpec::new(5).unwrap();
        let terms = build_terms(lattice);
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].flip_site(), 3);
        assert_eq!(terms[0].neighbors(), [1, 2, 4, 5]);
    }

    #[test]
    fn neighbor_indices_are_the_two_shells() {
        assert_eq!(neighbor_indices(5), [3, 4, 6, 7]);
        assert_eq!(neighbor_indices(3), [1, 2, 4, 5]);
    }

    #[test]
    fn boundary_sites_carry_no_terms() {
        let lattice = LatticeSpec::new(12).unwrap();
        for site in [1, 2, 11, 12] {
            assert!(HamTerm::new(lattice, site).is_err());
        }
        for site in 3..=10 {
            assert!(HamTerm::new(lattice, site).is_ok());
        }
    }

    #[test]
    fn activity_follows_the_two_or_three_rule() {
        // 11001: neighbours of site 3 are sites 1,2,4,5 = 1,1,0,1 -> three alive.
        let config = ClassicalConfig::from_bit_string("11001").unwrap();
        assert!(is_active(&config, 3));
        // 10001: neighbours 1,0,0,1 -> two alive.
        let config = ClassicalConfig::from_bit_string("10001").unwrap();
        assert!(is_active(&config, 3));
        // 00000, 10000, 11011 (four alive) are inert.
        for s in ["00000", "10000", "11011"] {
            let config = ClassicalConfig::from_bit_string(s).unwrap();
            assert!(!is_active(&config, 3), "{s} should be inert");
        }
    }

    #[test]
    fn activity_ignores_the_site_itself() {
        // Same neighbourhood, different centre bit: activity must match.
        let dead_centre = ClassicalConfig::from_bit_string("11001").unwrap();
        let live_centre = ClassicalConfig::from_bit_string("11101").unwrap();
        assert_eq!(is_active(&dead_centre, 3), is_active(&live_centre, 3));
    }

    #[test]
    fn partition_groups_by_site_mod_three() {
        let lattice = LatticeSpec::new(12).unwrap();
        let groups = sublattice_partition(&build_terms(lattice));
        let sites = |g: &[HamTerm]| g.iter().map(|t| t.flip_site()).collect::<Vec<_>>();
        assert_eq!(sites(&groups[0]), vec![3, 6, 9]);
        assert_eq!(sites(&groups[1]), vec![4, 7, 10]);
        assert_eq!(sites(&groups[2]), vec![5, 8]);
        // Within every group, flip sites are at least 3 apart.
        for group in &groups {
            for pair in group.windows(2) {
                assert!(pair[1].flip_site() - pair[0].flip_site() >= 3);
            }
        }
    }

    #[test]
    fn partition_covers_all_terms_once() {
        let lattice = LatticeSpec::new(32).unwrap();
        let terms = build_terms(lattice);
        let groups = sublattice_partition(&terms);
        let total: usize = groups.iter().map(|g| g.len()).sum();
        assert_eq!(total, terms.len());
    }

    #[test]
    fn bit_string_round_trip() {
        let config = ClassicalConfig::from_bit_string("0110010").unwrap();
        assert_eq!(config.to_bit_string(), "0110010");
        assert_eq!(config.alive_count(), 3);
        assert_eq!(config.len(), 7);
        assert!(ClassicalConfig::from_bit_string("01x").is_err());
    }

    #[test]
    fn basis_index_uses_site_one_as_lsb() {
        // 11001 -> bits of sites 1..5 -> 1 + 2 + 16 = 19.
        let config = ClassicalConfig::from_bit_string("11001").unwrap();
        assert_eq!(config.to_basis_index(), 19);
        let back = ClassicalConfig::from_basis_index(19, 5);
        assert_eq!(back, config);
    }

    #[test]
    fn reflection_is_an_involution() {
        let config = ClassicalConfig::from_bit_string("1100101").unwrap();
        assert_eq!(config.reflected().reflected(), config);
        assert_eq!(config.reflected().to_bit_string(), "1010011");
    }

    #[test]
    fn reflection_maps_term_set_onto_itself() {
        let lattice = LatticeSpec::new(11).unwrap();
        let sites: Vec<usize> = build_terms(lattice).iter().map(|t| t.flip_site()).collect();
        let mirrored: Vec<usize> = sites.iter().map(|s| lattice.sites() + 1 - s).collect();
        let mut sorted = mirrored.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, sites);
    }
}
