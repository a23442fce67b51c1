//! Reference data shipped with the crate.

use crate::error::Result;
use crate::inference::TransitionCounts;
use crate::network::RegionConfig;
use crate::partition::{default_partition, StrategyPartition};

pub const REFERENCE_COUNTS_CSV: &str = include_str!("../fixtures/reference_counts.csv");
pub const DEFAULT_PARTITION_JSON: &str = include_str!("../fixtures/default_partition.json");
pub const REGION_CONFIG_JSON: &str = include_str!("../fixtures/region_config.json");

/// Transition counts from a 5000-sample reference simulation, binned on the
/// default partition.
pub fn reference_counts() -> TransitionCounts {
    TransitionCounts::read_csv(REFERENCE_COUNTS_CSV.as_bytes(), default_partition()).expect("fixture parses")
}

pub fn shipped_partition() -> Result<StrategyPartition> {
    StrategyPartition::from_json(DEFAULT_PARTITION_JSON)
}

pub fn shipped_region_config() -> Result<RegionConfig> {
    RegionConfig::from_json(REGION_CONFIG_JSON)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_files_match_defaults() {
        assert_eq!(shipped_partition().unwrap(), default_partition());
        assert_eq!(shipped_region_config().unwrap(), RegionConfig::default());
        let n = reference_counts();
        assert_eq!(n.total(), 4999);
        assert_eq!(n.get(0, 0), 2977);
        assert_eq!(n.get(3, 3), 136);
    }
}
