//! Sharing a power shortage between several links.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AllocationEntry {
    /// Present transfer, MW.
    pub initial: f64,
    /// Estimated maximum emergency capacity, MW.
    pub mc: f64,
    /// `mc - initial`, MW.
    pub margin: f64,
    /// Transfer order after allocation, MW.
    pub target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationPlan {
    pub entries: Vec<AllocationEntry>,
    pub shortage: f64,
    /// Margin left on every link that still has one, MW.
    pub remaining_margin: f64,
    /// Part of the shortage no link can cover, MW.
    pub deficit: f64,
}

/// Raise the links so that all keep the same remaining margin.
///
/// `links` holds `(initial, mc)` pairs in MW. The common remaining margin
/// `r` solves `sum(max(margin_i - r, 0)) = shortage`; links whose margin is
/// below `r` stay where they are. A shortage beyond the summed margins
/// exhausts every link and the rest is reported as a deficit.
pub fn allocate(links: &[(f64, f64)], shortage: f64) -> Result<AllocationPlan> {
    if links.is_empty() {
        return Err(Error::Empty("allocation inputs"));
    }
    if !(shortage >= 0.0 && shortage.is_finite()) {
        return Err(Error::invalid("shortage", "must be non-negative"));
    }
    let mut margins = Vec::with_capacity(links.len());
    for &(initial, mc) in links {
        if !(mc >= initial) {
            return Err(Error::invalid(
                "mc",
                format!("capacity {mc} MW is below the present transfer {initial} MW"),
            ));
        }
        margins.push(mc - initial);
    }
    let total: f64 = margins.iter().sum();

    let (r, deficit) = if shortage >= total {
        (0.0, shortage - total)
    } else {
        let mut sorted = margins.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let mut head = 0.0;
        let mut level = 0.0;
        for (j, m) in sorted.iter().enumerate() {
            head += m;
            let candidate = (head - shortage) / (j + 1) as f64;
            let next = sorted.get(j + 1).copied().unwrap_or(0.0);
            if candidate >= next {
                level = candidate;
                break;
            }
        }
        (level, 0.0)
    };

    let entries = links
        .iter()
        .zip(&margins)
        .map(|(&(initial, mc), &margin)| AllocationEntry {
            initial,
            mc,
            margin,
            target: initial + (margin - r).max(0.0),
        })
        .collect();
    Ok(AllocationPlan {
        entries,
        shortage,
        remaining_margin: r,
        deficit,
    })
}
