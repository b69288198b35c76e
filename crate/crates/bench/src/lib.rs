//! Benchmark fixtures shared by the criterion targets.

use progc_core::{gray_initials, Configuration, InputFamily};

/// A single centred black cell on a row of `width` cells.
pub fn single_seed(width: usize) -> Configuration {
    let mut cells = vec![0u8; width];
    cells[width / 2] = 1;
    Configuration::from_cells(2, &cells).expect("binary cells")
}

/// The default Gray family (n = 40, W = 61).
pub fn default_family() -> InputFamily {
    gray_initials(40, 61).expect("valid family")
}
