//! Degree windows with certification status.
//!
//! A window records the degree interval a truncated computation is trusted
//! on, together with the word-length bound that truncation used. Certified
//! windows are produced by `bar::certify_window`; `exact` windows assert
//! that the underlying object is globally finite so no truncation happened.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WindowError {
    #[error("window [{lo}, {hi}] is not certified")]
    NotCertified { lo: i64, hi: i64 },
    #[error("degree {degree} is outside the certified window [{lo}, {hi}]")]
    OutsideWindow { degree: i64, lo: i64, hi: i64 },
    #[error("window bounds {lo} > {hi}")]
    EmptyWindow { lo: i64, hi: i64 },
    #[error("window [{lo}, {hi}] cannot be certified: {reason}")]
    NotCertifiable { lo: i64, hi: i64, reason: String },
    #[error("no jointly certifiable sub-window inside [{lo}, {hi}]")]
    NoJointWindow { lo: i64, hi: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationWindow {
    pub lo: i64,
    pub hi: i64,
    /// Max bar/cyclic word length admitted by the truncation.
    pub word_bound: usize,
    pub certified: bool,
}

impl TruncationWindow {
    pub fn new(lo: i64, hi: i64, word_bound: usize, certified: bool) -> Result<Self, WindowError> {
        if lo > hi {
            return Err(WindowError::EmptyWindow { lo, hi });
        }
        Ok(TruncationWindow {
            lo,
            hi,
            word_bound,
            certified,
        })
    }

    /// A window for an untruncated, globally finite object.
    pub fn exact(lo: i64, hi: i64) -> Self {
        TruncationWindow {
            lo: lo.min(hi),
            hi: hi.max(lo),
            word_bound: usize::MAX,
            certified: true,
        }
    }

    pub fn contains(&self, degree: i64) -> bool {
        self.lo <= degree && degree <= self.hi
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn require_certified(&self) -> Result<(), WindowError> {
        if self.certified {
            Ok(())
        } else {
            Err(WindowError::NotCertified {
                lo: self.lo,
                hi: self.hi,
            })
        }
    }

    /// Same bounds, word budget raised by one. Used by truncation-stability
    /// checks; a larger budget keeps the certificate valid.
    pub fn with_extra_word(&self) -> Self {
        TruncationWindow {
            word_bound: self.word_bound.saturating_add(1),
            ..*self
        }
    }

    pub fn intersect(&self, other: &TruncationWindow) -> Option<TruncationWindow> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo > hi {
            None
        } else {
            Some(TruncationWindow {
                lo,
                hi,
                word_bound: self.word_bound.min(other.word_bound),
                certified: self.certified && other.certified,
            })
        }
    }
}
