//! PGM (portable graymap) reader and writer.
//!
//! Accepts binary (P5) and ASCII (P2) graymaps with maxval up to 255;
//! header comments (`#` to end of line) are allowed. The writer always
//! emits canonical P5 — `P5\n<w> <h>\n255\n` followed by the raster — so
//! saving and re-loading is byte-exact.

use qimc_core::image::{GrayImage, ImageError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PgmError {
    #[error("malformed PGM: {0}")]
    Parse(String),
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
}

impl From<ImageError> for PgmError {
    fn from(err: ImageError) -> Self {
        PgmError::Parse(err.to_string())
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Cursor { bytes, pos: 0 }
    }

    /// Skips whitespace and `#` comments.
    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' | 0x0b | 0x0c => self.pos += 1,
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => return,
            }
        }
    }

    fn read_u32(&mut self, what: &str) -> Result<u32, PgmError> {
        self.skip_separators();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(PgmError::Parse(format!("expected {what}")));
        }
        let text = core::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        text.parse::<u32>()
            .map_err(|_| PgmError::Parse(format!("{what} out of range")))
    }
}

/// Parses a P5 or P2 graymap into a padded [`GrayImage`].
pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage, PgmError> {
    if bytes.len() < 2 {
        return Err(PgmError::Parse("missing magic number".into()));
    }
    let magic = &bytes[..2];
    let binary = match magic {
        b"P5" => true,
        b"P2" => false,
        b"P3" | b"P6" => {
            return Err(PgmError::UnsupportedFormat(
                "color (PPM) images are not supported".into(),
            ))
        }
        b"P1" | b"P4" => {
            return Err(PgmError::UnsupportedFormat(
                "bitmap (PBM) images are not supported".into(),
            ))
        }
        other => {
            return Err(PgmError::Parse(format!(
                "bad magic number {:?}",
                String::from_utf8_lossy(other)
            )))
        }
    };

    let mut cursor = Cursor::new(&bytes[2..]);
    let width = cursor.read_u32("width")?;
    let height = cursor.read_u32("height")?;
    let maxval = cursor.read_u32("maxval")?;
    if maxval == 0 {
        return Err(PgmError::Parse("maxval must be positive".into()));
    }
    if maxval > 255 {
        return Err(PgmError::UnsupportedFormat(format!(
            "maxval {maxval} exceeds 8-bit range"
        )));
    }
    if width == 0 || height == 0 {
        return Err(PgmError::Parse("image dimensions must be nonzero".into()));
    }

    let count = width as usize * height as usize;
    let raster = if binary {
        // exactly one separator byte between maxval and the raster
        let sep = 2 + cursor.pos;
        if sep >= bytes.len() || !bytes[sep].is_ascii_whitespace() {
            return Err(PgmError::Parse("missing separator before raster".into()));
        }
        let start = sep + 1;
        if bytes.len() < start + count {
            return Err(PgmError::Parse(format!(
                "raster truncated: {} of {count} bytes",
                bytes.len().saturating_sub(start)
            )));
        }
        let raster = bytes[start..start + count].to_vec();
        if let Some(&bad) = raster.iter().find(|&&p| p as u32 > maxval) {
            return Err(PgmError::Parse(format!(
                "pixel {bad} exceeds maxval {maxval}"
            )));
        }
        raster
    } else {
        let mut raster = Vec::with_capacity(count);
        for _ in 0..count {
            let value = cursor.read_u32("pixel")?;
            if value > maxval {
                return Err(PgmError::Parse(format!(
                    "pixel {value} exceeds maxval {maxval}"
                )));
            }
            raster.push(value as u8);
        }
        raster
    };

    Ok(GrayImage::from_raster(width, height, &raster)?)
}

/// Serializes to canonical binary P5. With `crop` set only the original
/// `width`×`height` region is written; otherwise the padded square raster.
pub fn save_pgm(image: &GrayImage, crop: bool) -> Vec<u8> {
    let (width, height) = if crop {
        image.original_dims()
    } else {
        (image.padded_size(), image.padded_size())
    };
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    if crop {
        out.extend(image.original_pixels());
    } else {
        out.extend_from_slice(image.pixels());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_table_example() {
        let bytes = b"P5\n2 2\n255\nOOOO"; // 0x4f = 79
        let img = load_pgm(bytes).unwrap();
        assert_eq!(img.original_dims(), (2, 2));
        assert_eq!(img.padded_size(), 2);
        assert!(img.pixels().iter().all(|&p| p == 79));
    }

    #[test]
    fn parses_ascii_p2() {
        let bytes = b"P2\n# a comment\n3 2\n255\n0 10 20\n30 40 50\n";
        let img = load_pgm(bytes).unwrap();
        assert_eq!(img.original_dims(), (3, 2));
        assert_eq!(img.get(1, 2), 50);
    }

    #[test]
    fn comments_allowed_between_header_fields() {
        let bytes = b"P5 # binary\n2 # width\n1 # height\n255\n\x05\x06";
        let img = load_pgm(bytes).unwrap();
        assert_eq!(img.original_dims(), (2, 1));
        assert_eq!(img.get(0, 0), 5);
        assert_eq!(img.get(0, 1), 6);
    }

    #[test]
    fn rejects_color_and_bitmap_magics() {
        assert!(matches!(
            load_pgm(b"P6\n1 1\n255\nabc"),
            Err(PgmError::UnsupportedFormat(_))
        ));
        assert!(matches!(
            load_pgm(b"P4\n1 1\n"),
            Err(PgmError::UnsupportedFormat(_))
        ));
        assert!(matches!(load_pgm(b"Px\n"), Err(PgmError::Parse(_))));
    }

    #[test]
    fn rejects_wide_maxval() {
        assert!(matches!(
            load_pgm(b"P5\n1 1\n65535\n\0\0"),
            Err(PgmError::UnsupportedFormat(_))
        ));
    }

    #[test]
    fn rejects_truncated_raster() {
        assert!(matches!(
            load_pgm(b"P5\n2 2\n255\nab"),
            Err(PgmError::Parse(_))
        ));
        assert!(matches!(
            load_pgm(b"P2\n2 2\n255\n1 2 3"),
            Err(PgmError::Parse(_))
        ));
    }

    #[test]
    fn save_crop_controls_dimensions() {
        let img = GrayImage::filled(192, 192, 9).unwrap();
        let cropped = save_pgm(&img, true);
        assert!(cropped.starts_with(b"P5\n192 192\n255\n"));
        let padded = save_pgm(&img, false);
        assert!(padded.starts_with(b"P5\n256 256\n255\n"));
        assert_eq!(padded.len(), 15 + 256 * 256);
    }

    #[test]
    fn round_trips_are_identities() {
        let raster: Vec<u8> = (0..35).map(|i| (i * 7) as u8).collect();
        let img = GrayImage::from_raster(7, 5, &raster).unwrap();
        let reloaded = load_pgm(&save_pgm(&img, true)).unwrap();
        assert_eq!(reloaded, img);
        // canonical bytes survive a load/save cycle exactly
        let bytes = save_pgm(&img, true);
        assert_eq!(save_pgm(&load_pgm(&bytes).unwrap(), true), bytes);
    }
}
