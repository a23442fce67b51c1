use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geographic regions, how many nodes sit in each, and the mean latency
/// between every pair of regions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionConfig {
    pub region_names: Vec<String>,
    pub node_counts: Vec<usize>,
    pub mean_latency: Vec<Vec<f64>>,
}

impl Default for RegionConfig {
    fn default() -> Self {
        Self {
            region_names: [
                "NORTH_AMERICA",
                "EUROPE",
                "SOUTH_AMERICA",
                "ASIA_PACIFIC",
                "JAPAN",
                "AUSTRALIA",
            ]
            .map(String::from)
            .to_vec(),
            node_counts: vec![33, 50, 1, 12, 2, 2],
            mean_latency: vec![
                vec![32.0, 124.0, 184.0, 198.0, 151.0, 189.0],
                vec![124.0, 11.0, 227.0, 237.0, 252.0, 294.0],
                vec![184.0, 227.0, 88.0, 325.0, 301.0, 322.0],
                vec![198.0, 237.0, 325.0, 85.0, 58.0, 198.0],
                vec![151.0, 252.0, 301.0, 58.0, 12.0, 126.0],
                vec![189.0, 294.0, 322.0, 198.0, 126.0, 16.0],
            ],
        }
    }
}

impl RegionConfig {
    pub fn validate(&self) -> Result<()> {
        let r = self.region_names.len();
        if r == 0 {
            return Err(Error::InvalidRegionConfig("no regions".into()));
        }
        if self.node_counts.len() != r {
            return Err(Error::InvalidRegionConfig(format!(
                "{} node counts for {r} regions",
                self.node_counts.len()
            )));
        }
        if self.mean_latency.len() != r || self.mean_latency.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidRegionConfig(format!(
                "mean latency must be {r}x{r}"
            )));
        }
        for (i, row) in self.mean_latency.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                if !(m > 0.0 && m.is_finite()) {
                    return Err(Error::InvalidRegionConfig(format!(
                        "mean latency ({i}, {j}) = {m} is not positive"
                    )));
                }
                if m != self.mean_latency[j][i] {
                    return Err(Error::InvalidRegionConfig(format!(
                        "mean latency is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        if self.total_nodes() < 2 {
            return Err(Error::InvalidRegionConfig("need at least two nodes".into()));
        }
        Ok(())
    }

    pub fn total_nodes(&self) -> usize {
        self.node_counts.iter().sum()
    }

    /// Region index of every node; nodes are numbered region by region.
    pub fn region_assignment(&self) -> Vec<usize> {
        self.node_counts
            .iter()
            .enumerate()
            .flat_map(|(region, &count)| std::iter::repeat_n(region, count))
            .collect()
    }

    /// Rescales the node counts to `total` nodes, keeping regional shares
    /// (largest-remainder rounding).
    pub fn with_total_nodes(&self, total: usize) -> Result<Self> {
        let current = self.total_nodes();
        if current == 0 {
            return Err(Error::InvalidRegionConfig("no nodes to rescale".into()));
        }
        if total == current {
            return Ok(self.clone());
        }
        let exact: Vec<f64> = self
            .node_counts
            .iter()
            .map(|&c| c as f64 * total as f64 / current as f64)
            .collect();
        let mut counts: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
        let mut order: Vec<usize> = (0..counts.len()).collect();
        order.sort_by(|&a, &b| {
            let ra = exact[a] - exact[a].floor();
            let rb = exact[b] - exact[b].floor();
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        let missing = total - counts.iter().sum::<usize>();
        for &i in order.iter().take(missing) {
            counts[i] += 1;
        }
        let out = Self {
            node_counts: counts,
            ..self.clone()
        };
        out.validate()?;
        Ok(out)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(json)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
