//! Naive reference pipeline: byte-per-cell rows, every evolution recomputed
//! from scratch for every runtime, payloads packed one bit at a time.

#![allow(dead_code, clippy::needless_range_loop, clippy::manual_is_multiple_of)]

/// One step of elementary rule `rule`; `fixed` is the background colour, `None` for cyclic.
pub fn naive_step(cells: &[u8], rule: u8, fixed: Option<u8>) -> Vec<u8> {
    let w = cells.len() as isize;
    let read = |i: isize| -> u8 {
        if (0..w).contains(&i) {
            cells[i as usize]
        } else {
            match fixed {
                Some(c) => c,
                None => cells[i.rem_euclid(w) as usize],
            }
        }
    };
    (0..w)
        .map(|i| {
            let index = 4 * read(i - 1) + 2 * read(i) + read(i + 1);
            (rule >> index) & 1
        })
        .collect()
}

pub fn naive_evolution(rule: u8, init: &[u8], steps: usize, fixed: Option<u8>) -> Vec<Vec<u8>> {
    let mut rows = vec![init.to_vec()];
    for _ in 0..steps {
        let next = naive_step(rows.last().unwrap(), rule, fixed);
        rows.push(next);
    }
    rows
}

/// Rows concatenated, 8 cells per byte, most significant bit first.
pub fn naive_payload(rows: &[Vec<u8>]) -> Vec<u8> {
    let mut out = Vec::new();
    let mut pos = 0usize;
    for row in rows {
        for &cell in row {
            if pos % 8 == 0 {
                out.push(0);
            }
            if cell == 1 {
                *out.last_mut().unwrap() |= 0x80 >> (pos % 8);
            }
            pos += 1;
        }
    }
    out
}

pub fn naive_compressed_bits(payload: &[u8]) -> u64 {
    miniz_oxide::deflate::compress_to_vec(payload, 10).len() as u64 * 8
}

pub fn naive_gray(n: usize, width: usize) -> Vec<Vec<u8>> {
    let bits = (usize::BITS - (n - 1).leading_zeros()) as usize;
    let offset = (width - bits) / 2;
    (0..n)
        .map(|j| {
            let g = j ^ (j >> 1);
            let mut row = vec![0u8; width];
            for b in 0..bits {
                row[offset + b] = ((g >> (bits - 1 - b)) & 1) as u8;
            }
            row
        })
        .collect()
}

/// Curve values `D(t') / (divisor(t') (n - 1))` for each sampled runtime.
pub fn naive_curve(
    rule: u8,
    inputs: &[Vec<u8>],
    times: &[usize],
    fixed: Option<u8>,
    include_input: bool,
    divisor: impl Fn(usize) -> usize,
) -> Vec<f64> {
    times
        .iter()
        .map(|&t| {
            let sizes: Vec<u64> = inputs
                .iter()
                .map(|input| {
                    let rows = naive_evolution(rule, input, t, fixed);
                    let first = if include_input { 0 } else { 1 };
                    naive_compressed_bits(&naive_payload(&rows[first..]))
                })
                .collect();
            let mut total = 0u64;
            for j in 0..sizes.len() - 1 {
                total += sizes[j].abs_diff(sizes[j + 1]);
            }
            total as f64 / (divisor(t) as f64 * (inputs.len() - 1) as f64)
        })
        .collect()
}

/// Slope of the least-squares line, textbook centred form.
pub fn naive_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mut sx, mut sy) = (0.0, 0.0);
    for i in 0..xs.len() {
        sx += xs[i];
        sy += ys[i];
    }
    let (mx, my) = (sx / n, sy / n);
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..xs.len() {
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    for i in 0..xs.len() {
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    sxy / sxx
}
