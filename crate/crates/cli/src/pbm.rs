//! Binary portable bitmap (P4) encoding of space-time diagrams.

/// Encodes `rows` (all of equal width) as a P4 image; nonzero cells are black.
///
/// Each raster row is packed MSB-first and padded to a whole byte. Comment
/// lines are written between the magic number and the dimensions.
pub fn encode(rows: &[Vec<u8>], comments: &[String]) -> Vec<u8> {
    let width = rows.first().map_or(0, Vec::len);
    let mut out = b"P4\n".to_vec();
    for c in comments {
        for line in c.lines() {
            out.extend_from_slice(format!("# {line}\n").as_bytes());
        }
    }
    out.extend_from_slice(format!("{width} {}\n", rows.len()).as_bytes());
    for row in rows {
        debug_assert_eq!(row.len(), width);
        for chunk in row.chunks(8) {
            let mut byte = 0u8;
            for (i, &cell) in chunk.iter().enumerate() {
                if cell != 0 {
                    byte |= 0x80 >> i;
                }
            }
            out.push(byte);
        }
    }
    out
}

/// Parsed P4 image: dimensions and cells (1 = black).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitmap {
    pub width: usize,
    pub height: usize,
    pub rows: Vec<Vec<u8>>,
}

/// Decodes a P4 image written by [`encode`] (or any conforming writer).
pub fn decode(bytes: &[u8]) -> Option<Bitmap> {
    let rest = bytes.strip_prefix(b"P4")?;
    let mut pos = 0;
    let mut fields = Vec::new();
    while fields.len() < 2 {
        match rest.get(pos)? {
            b'#' => {
                while *rest.get(pos)? != b'\n' {
                    pos += 1;
                }
            }
            c if c.is_ascii_whitespace() => pos += 1,
            _ => {
                let start = pos;
                while rest.get(pos).is_some_and(u8::is_ascii_digit) {
                    pos += 1;
                }
                fields.push(std::str::from_utf8(&rest[start..pos]).ok()?.parse::<usize>().ok()?);
            }
        }
    }
    // Exactly one whitespace byte separates the header from the raster.
    let raster = rest.get(pos + 1..)?;
    let (width, height) = (fields[0], fields[1]);
    let stride = width.div_ceil(8);
    if raster.len() != stride * height {
        return None;
    }
    let rows = raster
        .chunks(stride.max(1))
        .take(height)
        .map(|line| (0..width).map(|i| (line[i / 8] >> (7 - i % 8)) & 1).collect())
        .collect();
    Some(Bitmap { width, height, rows })
}
