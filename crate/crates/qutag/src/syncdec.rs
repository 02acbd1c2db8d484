//! Decoders: nearest-shift synchronization, orthogonal digit recovery,
//! threshold header location, and the naive single-marker baseline.

use crate::error::{Error, Result};
use crate::tags::{OrthogonalTagSet, QuantumTag, TagVector};

/// What a decoder concluded about one measured window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SyncStatus {
    /// The window sits on a frame boundary.
    Aligned,
    /// The window starts `t` positions into a frame, `1 <= t <= v-1`.
    MisalignedBy(usize),
    /// Beyond the correction radius with several shifts equally close;
    /// candidates are listed ascending.
    Ambiguous(Vec<usize>),
    /// Beyond the correction radius with no tie to report.
    NoMatch,
}

/// A decode outcome: the status, the Hamming distance to the decided (or
/// nearest) codeword, and the recovered digit in orthogonal mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncResult {
    pub status: SyncStatus,
    pub distance: usize,
    pub digit: Option<usize>,
}

impl SyncResult {
    /// True when the decoder committed to a shift (aligned counts as t = 0).
    pub fn decided_shift(&self) -> Option<usize> {
        match self.status {
            SyncStatus::Aligned => Some(0),
            SyncStatus::MisalignedBy(t) => Some(t),
            _ => None,
        }
    }
}

/// Hamming distance from `outcome` to every cyclic shift of the tag,
/// via the shared-ones overlap table rather than v full comparisons.
fn shift_distances(outcome: &[bool], tag: &QuantumTag) -> Vec<usize> {
    let v = tag.v();
    let k = tag.k();
    let ones: Vec<usize> = (0..v).filter(|&i| outcome[i]).collect();
    let mut overlap = vec![0usize; v];
    for &y in &ones {
        for &s in tag.support() {
            overlap[(y + v - s) % v] += 1;
        }
    }
    overlap
        .iter()
        .map(|&o| k + ones.len() - 2 * o)
        .collect()
}

/// Synchronizes a length-`v` window against all cyclic shifts of a tag.
///
/// With `t` the decided shift, the window starts `t` symbols after a frame
/// boundary. Any outcome within the correction radius
/// `floor((rho - 1)/2)` of some shift decodes to that shift, which is then
/// provably unique. Beyond the radius the decoder stays deterministic
/// instead of guessing: equally-near shifts come back as `Ambiguous`
/// (ascending), a lone nearest shift as `NoMatch` carrying the distance.
pub fn nearest_shift_decode(outcome: &[bool], tag: &QuantumTag) -> Result<SyncResult> {
    if outcome.len() != tag.v() {
        return Err(Error::LengthMismatch(outcome.len(), tag.v()));
    }
    let threshold = tag.decision_threshold()?;
    let distances = shift_distances(outcome, tag);
    let best = *distances.iter().min().expect("v >= 2");
    let ties: Vec<usize> = (0..tag.v()).filter(|&t| distances[t] == best).collect();

    if best <= threshold {
        // shifts are pairwise >= rho >= 2*threshold + 1 apart
        debug_assert_eq!(ties.len(), 1);
        let t = ties[0];
        let status = if t == 0 {
            SyncStatus::Aligned
        } else {
            SyncStatus::MisalignedBy(t)
        };
        return Ok(SyncResult { status, distance: best, digit: None });
    }
    if ties.len() > 1 {
        return Ok(SyncResult {
            status: SyncStatus::Ambiguous(ties),
            distance: best,
            digit: None,
        });
    }
    Ok(SyncResult { status: SyncStatus::NoMatch, distance: best, digit: None })
}

/// Identifies which tag of an orthogonal set a window carries.
///
/// Reports `Aligned` with the digit when some codeword lies within the
/// set's decision threshold (unique by the code distance). Anything
/// farther, including any lightly-corrupted splice of two codewords,
/// comes back `NoMatch`, which callers read as misalignment.
pub fn orthogonal_decode(outcome: &[bool], set: &OrthogonalTagSet) -> Result<SyncResult> {
    if outcome.len() != set.v() {
        return Err(Error::LengthMismatch(outcome.len(), set.v()));
    }
    let threshold = set.decision_threshold();
    let window = outcome.to_vec();
    let mut best = usize::MAX;
    let mut best_digit = 0usize;
    for (j, tag) in set.tags().iter().enumerate() {
        let d = hamming_to(&window, &tag.vector());
        if d < best {
            best = d;
            best_digit = j;
        }
    }
    if best <= threshold {
        Ok(SyncResult {
            status: SyncStatus::Aligned,
            distance: best,
            digit: Some(best_digit),
        })
    } else {
        Ok(SyncResult { status: SyncStatus::NoMatch, distance: best, digit: None })
    }
}

fn hamming_to(window: &[bool], code: &TagVector) -> usize {
    window
        .iter()
        .zip(code.bits())
        .filter(|(a, b)| *a != *b)
        .count()
}

/// How [`locate_headers`] treats the noise it must survive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocateMode {
    /// Symmetric errors: report windows within `floor((delta-1)/2)` of the
    /// header pattern.
    General,
    /// Erasures only (ones appear, never vanish): report windows whose
    /// header positions all read 1. Sound while each length-v window holds
    /// at most `delta - 1` erasures.
    ErasureOnly,
}

/// Scans a measured stream for header occurrences, reporting start
/// positions ascending. Headers are aperiodic: no window wraps past the
/// end of the stream.
pub fn locate_headers(
    stream: &[bool],
    header: &QuantumTag,
    mode: LocateMode,
    delta: usize,
) -> Result<Vec<usize>> {
    if delta < 1 {
        return Err(Error::InvalidParameter(
            "header dissimilarity delta must be at least 1".into(),
        ));
    }
    let v = header.v();
    if stream.len() < v {
        return Err(Error::LengthMismatch(stream.len(), v));
    }
    let k = header.k();
    let last = stream.len() - v;

    // aperiodic overlap of the header with every window position
    let mut overlap = vec![0usize; last + 1];
    let mut prefix_ones = vec![0usize; stream.len() + 1];
    for i in 0..stream.len() {
        prefix_ones[i + 1] = prefix_ones[i] + usize::from(stream[i]);
        if stream[i] {
            for &s in header.support() {
                if let Some(p) = i.checked_sub(s) {
                    if p <= last {
                        overlap[p] += 1;
                    }
                }
            }
        }
    }

    let threshold = (delta - 1) / 2;
    let mut positions = Vec::new();
    for p in 0..=last {
        let hit = match mode {
            LocateMode::General => {
                let ones = prefix_ones[p + v] - prefix_ones[p];
                k + ones - 2 * overlap[p] <= threshold
            }
            LocateMode::ErasureOnly => overlap[p] == k,
        };
        if hit {
            positions.push(p);
        }
    }
    Ok(positions)
}

/// The baseline scheme: every 1 read is taken as a frame-start marker.
/// Exact on a noiseless stream and tricked by any single erasure.
pub fn naive_boundary_scan(stream: &[bool]) -> Vec<usize> {
    (0..stream.len()).filter(|&i| stream[i]).collect()
}
