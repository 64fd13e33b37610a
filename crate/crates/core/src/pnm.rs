//! Binary 8-bit PGM (P5) and PPM (P6) reading and writing.
//!
//! Samples are mapped to `[0, 1]` by dividing by 255 on load. On save they are
//! clamped to `[0, 1]` and quantized with `round(v * 255)` (halves away from zero).

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::Image;

pub fn load_image(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

pub fn save_image(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode(img)?;
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&bytes).map_err(|e| Error::io(path, e))
}

/// Quantizes one intensity to a byte.
#[inline]
pub fn quantize(v: f64) -> u8 {
    // NaN clamps to 0.
    let v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
    (v * 255.0).round() as u8
}

pub fn encode(img: &Image) -> Result<Vec<u8>> {
    let magic = match img.channels() {
        1 => "P5",
        3 => "P6",
        c => {
            return Err(Error::Shape(format!(
                "netpbm output needs 1 or 3 channels, got {c}"
            )))
        }
    };
    let header = format!("{magic}\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.len());
    out.extend_from_slice(header.as_bytes());
    let n = img.pixels();
    let c = img.channels();
    // Interleave planes back into pixel order.
    for i in 0..n {
        for ch in 0..c {
            out.push(quantize(img.data()[ch * n + i]));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn token(&mut self, field: &'static str) -> Result<&[u8]> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::format(field, "missing"));
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn number(&mut self, field: &'static str) -> Result<usize> {
        let tok = self.token(field)?;
        let s = std::str::from_utf8(tok).map_err(|_| Error::format(field, "not ASCII"))?;
        s.parse::<usize>()
            .map_err(|_| Error::format(field, format!("{s:?} is not a non-negative integer")))
    }
}

pub fn decode(bytes: &[u8]) -> Result<Image> {
    let mut cur = Cursor { bytes, pos: 0 };
    let channels = match cur.token("magic")? {
        b"P5" => 1,
        b"P6" => 3,
        other => {
            return Err(Error::format(
                "magic",
                format!("expected P5 or P6, got {:?}", String::from_utf8_lossy(other)),
            ))
        }
    };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::format("width", "image dimensions must be positive"));
    }
    if maxval != 255 {
        return Err(Error::format(
            "maxval",
            format!("unsupported maxval {maxval} (only 255 is supported)"),
        ));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(Error::format("payload", "missing separator after maxval")),
    }
    let n = width * height;
    let payload = &bytes[cur.pos..];
    if payload.len() < n * channels {
        return Err(Error::format(
            "payload",
            format!("truncated: expected {} bytes, found {}", n * channels, payload.len()),
        ));
    }
    let mut data = vec![0.0; n * channels];
    for i in 0..n {
        for c in 0..channels {
            data[c * n + i] = payload[i * channels + c] as f64 / 255.0;
        }
    }
    Image::from_vec(height, width, channels, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_p5() {
        let mut bytes = b"P5\n2 2\n255\n".to_vec();
        bytes.extend_from_slice(&[0, 255, 128, 64]);
        let img = decode(&bytes).unwrap();
        assert_eq!((img.height(), img.width(), img.channels()), (2, 2, 1));
        assert_eq!(img.data(), &[0.0, 1.0, 128.0 / 255.0, 64.0 / 255.0]);
    }

    #[test]
    fn decode_p6() {
        let mut bytes = b"P6 1 1 255\n".to_vec();
        bytes.extend_from_slice(&[255, 0, 0]);
        let img = decode(&bytes).unwrap();
        assert_eq!(img.channels(), 3);
        assert_eq!(img.data(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn decode_skips_comments() {
        let mut bytes = b"P5\n# made by hand\n1 1\n255\n".to_vec();
        bytes.push(51);
        assert_eq!(decode(&bytes).unwrap().data(), &[0.2]);
    }

    #[test]
    fn rejects_16_bit() {
        let mut bytes = b"P5\n1 1\n65535\n".to_vec();
        bytes.extend_from_slice(&[0, 0]);
        match decode(&bytes) {
            Err(Error::Format { field, .. }) => assert_eq!(field, "maxval"),
            other => panic!("expected maxval error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_truncated_payload() {
        let mut bytes = b"P5\n2 2\n255\n".to_vec();
        bytes.extend_from_slice(&[1, 2, 3]);
        match decode(&bytes) {
            Err(Error::Format { field, .. }) => assert_eq!(field, "payload"),
            other => panic!("expected payload error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_header() {
        for (bytes, field) in [
            (&b"P3\n1 1\n255\n"[..], "magic"),
            (&b"P5\nx 1\n255\n"[..], "width"),
            (&b"P5\n1\n"[..], "height"),
            (&b"P5\n1 1\n"[..], "maxval"),
            (&b""[..], "magic"),
        ] {
            match decode(bytes) {
                Err(Error::Format { field: f, .. }) => assert_eq!(f, field),
                other => panic!("expected {field} error, got {other:?}"),
            }
        }
    }

    #[test]
    fn quantization_rules() {
        assert_eq!(quantize(0.5), 128);
        assert_eq!(quantize(1.2), 255);
        assert_eq!(quantize(-0.3), 0);
        assert_eq!(quantize(f64::NAN), 0);
    }

    #[test]
    fn every_byte_round_trips_within_half_step() {
        // Exhaustive over the byte domain and its midpoints.
        let mut worst: f64 = 0.0;
        for k in 0..=510u32 {
            let v = k as f64 / 510.0;
            let back = quantize(v) as f64 / 255.0;
            worst = worst.max((back - v).abs());
        }
        assert!(worst <= 1.0 / 510.0 + 1e-15, "worst {worst}");
        for b in 0..=255u8 {
            assert_eq!(quantize(b as f64 / 255.0), b);
        }
    }

    #[test]
    fn rejects_two_channel_output() {
        assert!(encode(&Image::zeros(1, 1, 2)).is_err());
    }
}
