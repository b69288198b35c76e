//! Compressed size of a space-time diagram as a proxy for its algorithmic complexity.
//!
//! Payloads carry no header: rows are concatenated in order, cells row-major.
//! Binary diagrams pack 8 cells per byte, most significant bit first, with
//! rows running on without byte alignment and the final partial byte
//! zero-padded. Diagrams with k > 2 use one byte per cell.
//!
//! The compressor is raw DEFLATE from `miniz_oxide` at level 10, its
//! maximum-effort setting. Output never exceeds `raw + STORED_OVERHEAD_BITS`
//! for payloads below 64 KiB, the cost of falling back to a single stored block.

use serde::{Deserialize, Serialize};

use crate::engine::{evolve, Configuration, Evolution, LifeEvolution, RuleTable};
use crate::{Error, Result};

pub const COMPRESSOR_ID: &str = "deflate-raw:miniz_oxide-0.8:level-10";

const LEVEL: u8 = 10;

/// Stored-block framing: 3 header bits padded to a byte plus LEN/NLEN.
pub const STORED_OVERHEAD_BITS: u64 = 40;

/// Anything that is a stack of equally sized rows of cells.
pub trait SpaceTime {
    fn colors(&self) -> u8;

    /// Cells per row (W for 1-D, H·W for 2-D frames).
    fn row_cells(&self) -> usize;

    fn row_count(&self) -> usize;

    fn write_row(&self, row: usize, out: &mut PayloadWriter);
}

/// Appends rows to a payload in the canonical layout.
#[derive(Debug, Default)]
pub struct PayloadWriter {
    bytes: Vec<u8>,
    acc: u64,
    filled: u32,
}

impl PayloadWriter {
    fn with_capacity(bytes: usize) -> Self {
        PayloadWriter {
            bytes: Vec::with_capacity(bytes),
            ..Default::default()
        }
    }

    /// Appends the top `count` bits of `word`.
    #[inline]
    pub fn push_bits(&mut self, word: u64, count: u32) {
        if count == 0 {
            return;
        }
        let word = if count == 64 { word } else { word & !(u64::MAX >> count) };
        let free = 64 - self.filled;
        if count < free {
            self.acc |= word >> self.filled;
            self.filled += count;
        } else {
            self.acc |= if self.filled == 0 { word } else { word >> self.filled };
            self.bytes.extend_from_slice(&self.acc.to_be_bytes());
            let spill = count - free;
            self.acc = if spill == 0 { 0 } else { word << free };
            self.filled = spill;
        }
    }

    pub fn push_bit(&mut self, bit: u8) {
        self.push_bits((bit as u64) << 63, 1);
    }

    pub fn push_byte_cell(&mut self, cell: u8) {
        debug_assert_eq!(self.filled, 0);
        self.bytes.push(cell);
    }

    fn finish(mut self) -> Vec<u8> {
        let tail = self.filled.div_ceil(8) as usize;
        self.bytes.extend_from_slice(&self.acc.to_be_bytes()[..tail]);
        self.bytes
    }
}

fn payload_len(colors: u8, cells: usize) -> usize {
    if colors == 2 {
        cells.div_ceil(8)
    } else {
        cells
    }
}

/// Serializes rows `first..=last` of `diagram`.
pub fn serialize_rows(diagram: &impl SpaceTime, first: usize, last: usize) -> Vec<u8> {
    let rows = (last + 1).saturating_sub(first);
    let mut out = PayloadWriter::with_capacity(payload_len(diagram.colors(), rows * diagram.row_cells()));
    for row in first..=last.min(diagram.row_count().saturating_sub(1)) {
        diagram.write_row(row, &mut out);
    }
    out.finish()
}

/// Serializes every row, input row included.
pub fn serialize(diagram: &impl SpaceTime) -> Vec<u8> {
    serialize_rows(diagram, 0, diagram.row_count() - 1)
}

/// Payload of the first `rows` rows given the payload of a longer stack
/// starting at the same row.
pub fn truncate_payload(full: &[u8], colors: u8, row_cells: usize, rows: usize) -> Vec<u8> {
    let cells = rows * row_cells;
    let len = payload_len(colors, cells);
    let mut out = full[..len].to_vec();
    if colors == 2 && !cells.is_multiple_of(8) {
        if let Some(last) = out.last_mut() {
            *last &= 0xFFu8 << (8 - cells % 8);
        }
    }
    out
}

/// Shape needed to decode a headerless payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims {
    pub rows: usize,
    pub width: usize,
    pub colors: u8,
}

/// Inverse of [`serialize`] for 1-D diagrams.
pub fn deserialize(payload: &[u8], dims: Dims) -> Result<Vec<Configuration>> {
    let cells = dims.rows * dims.width;
    if payload.len() != payload_len(dims.colors, cells) {
        return Err(Error::arg(format!(
            "payload of {} bytes does not match {}x{} cells",
            payload.len(),
            dims.rows,
            dims.width
        )));
    }
    let cell = |i: usize| -> u8 {
        if dims.colors == 2 {
            (payload[i / 8] >> (7 - i % 8)) & 1
        } else {
            payload[i]
        }
    };
    (0..dims.rows)
        .map(|r| {
            let row: Vec<u8> = (0..dims.width).map(|c| cell(r * dims.width + c)).collect();
            Configuration::from_cells(dims.colors, &row)
        })
        .collect()
}

/// Size in bits of the compressed payload.
pub fn compressed_size(payload: &[u8]) -> u64 {
    miniz_oxide::deflate::compress_to_vec(payload, LEVEL).len() as u64 * 8
}

/// Compressed and raw size of one evolution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityValue {
    pub bits: u64,
    pub raw_bits: u64,
    pub compressor_id: String,
}

fn bits_per_cell(colors: u8) -> u64 {
    (u8::BITS - (colors - 1).leading_zeros()) as u64
}

/// Complexity of rows `first..` of a diagram; `include_input` selects `first = 0`.
pub fn complexity_of(diagram: &impl SpaceTime, include_input: bool) -> ComplexityValue {
    let first = usize::from(!include_input);
    let last = diagram.row_count() - 1;
    let payload = serialize_rows(diagram, first, last);
    let rows = (last + 1 - first) as u64;
    ComplexityValue {
        bits: compressed_size(&payload),
        raw_bits: rows * diagram.row_cells() as u64 * bits_per_cell(diagram.colors()),
        compressor_id: COMPRESSOR_ID.to_string(),
    }
}

/// `C(M_t(i))`: compressed size of the full `t`-step evolution of `init`.
pub fn complexity(rule: &RuleTable, init: &Configuration, steps: usize) -> Result<ComplexityValue> {
    Ok(complexity_of(&evolve(rule, init, steps)?, true))
}

impl SpaceTime for Evolution {
    fn colors(&self) -> u8 {
        Evolution::colors(self)
    }

    fn row_cells(&self) -> usize {
        self.width()
    }

    fn row_count(&self) -> usize {
        self.rows().len()
    }

    fn write_row(&self, row: usize, out: &mut PayloadWriter) {
        let config = &self.rows()[row];
        match config.words() {
            Some(words) => {
                let width = config.width();
                for (w, &word) in words.iter().enumerate() {
                    let count = (width - w * 64).min(64) as u32;
                    out.push_bits(word, count);
                }
            }
            None => {
                for i in 0..config.width() {
                    out.push_byte_cell(config.get(i));
                }
            }
        }
    }
}

impl SpaceTime for LifeEvolution {
    fn colors(&self) -> u8 {
        2
    }

    fn row_cells(&self) -> usize {
        let f = &self.frames()[0];
        f.height() * f.width()
    }

    fn row_count(&self) -> usize {
        self.frames().len()
    }

    fn write_row(&self, row: usize, out: &mut PayloadWriter) {
        for &cell in self.frames()[row].cells() {
            out.push_bit(cell);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{LifeRule, LifeGrid};
    use proptest::prelude::*;
    use rand::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn one_row(bits: &str) -> Evolution {
        // Identity rule: two copies of the row.
        let c = Configuration::from_bits(bits).unwrap();
        evolve(&RuleTable::elementary(204), &c, 1).unwrap()
    }

    #[test]
    fn msb_first_packing() {
        assert_eq!(serialize_rows(&one_row("00000000"), 0, 0), [0x00]);
        assert_eq!(serialize_rows(&one_row("10000000"), 0, 0), [0x80]);
        assert_eq!(serialize_rows(&one_row("101"), 0, 0), [0xA0]);
        // Rows run on without alignment: 101 101 -> 1011 01(00).
        assert_eq!(serialize(&one_row("101")), [0xB4]);
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let bits: String = (0..130).map(|i| if i % 3 == 0 { '1' } else { '0' }).collect();
        let evo = one_row(&bits);
        let payload = serialize(&evo);
        assert_eq!(payload.len(), 260usize.div_ceil(8));
        let rows = deserialize(&payload, Dims { rows: 2, width: 130, colors: 2 }).unwrap();
        assert_eq!(rows, evo.rows());
    }

    #[test]
    fn multicolour_is_byte_per_cell() {
        let rule = crate::engine::rule_from_number(&num_bigint::BigUint::from(123456u32), 3, 1).unwrap();
        let c = Configuration::from_cells(3, &[0, 1, 2, 1]).unwrap();
        let evo = evolve(&rule, &c, 2).unwrap();
        let payload = serialize(&evo);
        assert_eq!(payload.len(), 12);
        assert_eq!(&payload[..4], &[0, 1, 2, 1]);
        let v = complexity_of(&evo, true);
        assert_eq!(v.raw_bits, 3 * 4 * 2);
    }

    #[test]
    fn empty_payload_has_constant_header() {
        let h = compressed_size(&[]);
        assert!(h > 0);
        assert_eq!(h, compressed_size(&[]));
    }

    #[test]
    fn zeros_compress_far_below_raw() {
        let bits = compressed_size(&[0u8; 4096]);
        assert!(bits < 4096, "{bits}");
    }

    #[test]
    fn random_bytes_are_incompressible() {
        let mut payload = vec![0u8; 4096];
        ChaCha8Rng::seed_from_u64(99).fill_bytes(&mut payload);
        let bits = compressed_size(&payload);
        assert!(bits as f64 >= 32768.0 * 0.99, "{bits}");
        assert!(bits <= 32768 + STORED_OVERHEAD_BITS, "{bits}");
    }

    #[test]
    fn raw_bits_and_include_flag() {
        let c = Configuration::from_bits("0010100").unwrap();
        let evo = evolve(&RuleTable::elementary(30), &c, 5).unwrap();
        assert_eq!(complexity_of(&evo, true).raw_bits, 6 * 7);
        assert_eq!(complexity_of(&evo, false).raw_bits, 5 * 7);
        assert_eq!(complexity(&RuleTable::elementary(30), &c, 5).unwrap(), complexity_of(&evo, true));
    }

    #[test]
    fn life_frames_are_row_major() {
        let g = LifeGrid::parse("#..\n...\n..#").unwrap();
        let evo = LifeRule::CONWAY.evolve(&g, 1).unwrap();
        // Frame 0: 100000001, frame 1 is empty (isolated cells die).
        assert_eq!(serialize(&evo), [0x80, 0x80, 0x00]);
    }

    #[test]
    fn truncation_matches_direct_serialization() {
        let c = Configuration::from_bits("0001011000110").unwrap();
        let evo = evolve(&RuleTable::elementary(110), &c, 20).unwrap();
        let full = serialize(&evo);
        for rows in 1..=21 {
            assert_eq!(truncate_payload(&full, 2, 13, rows), serialize_rows(&evo, 0, rows - 1));
        }
    }

    proptest! {
        #[test]
        fn serialization_roundtrip(rule in 0u8..=255, cells in prop::collection::vec(0u8..2, 1..150), steps in 1usize..20) {
            let c = Configuration::from_cells(2, &cells).unwrap();
            let evo = evolve(&RuleTable::elementary(rule), &c, steps).unwrap();
            let payload = serialize(&evo);
            let dims = Dims { rows: steps + 1, width: cells.len(), colors: 2 };
            prop_assert_eq!(deserialize(&payload, dims).unwrap(), evo.rows());
        }

        #[test]
        fn bounded_overhead(payload in prop::collection::vec(any::<u8>(), 0..3000)) {
            let bits = compressed_size(&payload);
            prop_assert!(bits <= payload.len() as u64 * 8 + STORED_OVERHEAD_BITS);
        }
    }
}
