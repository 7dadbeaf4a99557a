//! Shared fixtures for the criterion benches.

use permpoly::FieldCtx;

/// Mid-size tower q = 32, |field| = 2^15: large enough that per-element
/// costs dominate, small enough to sweep exhaustively per iteration.
pub fn mid_tower() -> FieldCtx {
    FieldCtx::new(2, 5, 3).expect("within the desk-scale cap")
}

/// Odd-characteristic tower |field| = 343.
pub fn f343() -> FieldCtx {
    FieldCtx::new(7, 1, 3).expect("within the desk-scale cap")
}
