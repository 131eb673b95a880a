//! The `CWMF` compressed waveform library file.
//!
//! All integers are little-endian.
//!
//! ```text
//! header   "CWMF" | u8 version | u8 variant | u8 window size | u16 scale | u32 entries
//! entry    u16 label length | label (UTF-8) | u32 original length
//!          | u8 uniform width | f64 threshold | windows
//! windows  for each window index: I slots, then Q slots
//! ```
//!
//! Variant codes are 0 (DCT-N), 1 (DCT-W) and 2 (int-DCT-W). Each window
//! holds `uniform width` slots: the kept coefficients, the RLE sentinel if
//! the window ends in zeros, then zero padding. Integer slots are `i16`
//! with sentinel `-32768`. The floating-point variants store `f64` slots
//! with sentinel negative infinity. DCT-N writes a window size of 0 since
//! each entry is a single window spanning the whole pulse, and a uniform
//! width of 255 escapes to a following `u32`.

use std::io::{self, Read, Write};

use crate::codec::{ChannelWindows, CompressedWaveform, CompressedWindow, Slot};
use crate::error::{Error, Result};
use crate::transform::{window_count, TransformKind, TransformVariant, WindowSize};

pub const MAGIC: &[u8; 4] = b"CWMF";
pub const VERSION: u8 = 1;
pub const HEADER_BYTES: usize = 4 + 1 + 1 + 1 + 2 + 4;
const WIDTH_ESCAPE: u8 = 0xFF;

fn slot_bytes(variant: TransformVariant) -> usize {
    if variant.is_integer() {
        2
    } else {
        8
    }
}

/// Bytes one entry occupies in a library file.
pub fn entry_bytes(c: &CompressedWaveform) -> usize {
    let width_field = if c.uniform_width() >= WIDTH_ESCAPE as usize { 5 } else { 1 };
    2 + c.label().len()
        + 4
        + width_field
        + 8
        + 2 * c.window_count() * c.uniform_width() * slot_bytes(c.variant())
}

/// Compression ratio including the entry's header fields, against the
/// original stored as 16-bit I and Q samples.
pub fn effective_ratio(c: &CompressedWaveform) -> f64 {
    (2 * 2 * c.original_length()) as f64 / entry_bytes(c) as f64
}

/// Serializes a library. All entries must share one variant.
pub fn write_library<W: Write>(mut out: W, entries: &[CompressedWaveform]) -> Result<()> {
    let first = entries
        .first()
        .ok_or_else(|| Error::invalid("cannot write an empty library"))?;
    let variant = first.variant();
    if let Some(other) = entries.iter().find(|e| e.variant() != variant) {
        return Err(Error::invalid(format!(
            "entry {:?} uses {} but the library uses {variant}",
            other.label(),
            other.variant()
        )));
    }
    let count = u32::try_from(entries.len()).map_err(|_| Error::invalid("too many entries"))?;
    out.write_all(MAGIC)?;
    out.write_all(&[
        VERSION,
        variant.kind().code(),
        variant.window_size().map_or(0, |w| w.get() as u8),
    ])?;
    out.write_all(&(variant.scale() as u16).to_le_bytes())?;
    out.write_all(&count.to_le_bytes())?;
    for e in entries {
        write_entry(&mut out, e)?;
    }
    out.flush()?;
    Ok(())
}

fn write_entry<W: Write>(out: &mut W, e: &CompressedWaveform) -> Result<()> {
    let label = e.label().as_bytes();
    let label_len = u16::try_from(label.len())
        .map_err(|_| Error::invalid(format!("label {:?} is too long", e.label())))?;
    let length = u32::try_from(e.original_length())
        .map_err(|_| Error::invalid("waveform is too long for the format"))?;
    out.write_all(&label_len.to_le_bytes())?;
    out.write_all(label)?;
    out.write_all(&length.to_le_bytes())?;
    let width = e.uniform_width();
    if width >= WIDTH_ESCAPE as usize {
        out.write_all(&[WIDTH_ESCAPE])?;
        out.write_all(&(width as u32).to_le_bytes())?;
    } else {
        out.write_all(&[width as u8])?;
    }
    out.write_all(&e.threshold_used().to_le_bytes())?;

    let mut buf = Vec::with_capacity(2 * e.window_count() * width * slot_bytes(e.variant()));
    match e.windows() {
        ChannelWindows::Int([i, q]) => {
            for (wi, wq) in i.iter().zip(q) {
                for s in wi.to_slots(width).into_iter().chain(wq.to_slots(width)) {
                    buf.extend_from_slice(&s.to_le_bytes());
                }
            }
        }
        ChannelWindows::Float([i, q]) => {
            for (wi, wq) in i.iter().zip(q) {
                for s in wi.to_slots(width).into_iter().chain(wq.to_slots(width)) {
                    buf.extend_from_slice(&s.to_le_bytes());
                }
            }
        }
    }
    out.write_all(&buf)?;
    Ok(())
}

/// Serializes a library into memory.
pub fn to_bytes(entries: &[CompressedWaveform]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_library(&mut buf, entries)?;
    Ok(buf)
}

struct Reader<R> {
    inner: R,
}

impl<R: Read> Reader<R> {
    fn bytes<const N: usize>(&mut self, what: &str) -> Result<[u8; N]> {
        let mut b = [0; N];
        self.inner.read_exact(&mut b).map_err(|e| truncated(e, what))?;
        Ok(b)
    }

    fn vec(&mut self, n: usize, what: &str) -> Result<Vec<u8>> {
        let mut b = vec![0; n];
        self.inner.read_exact(&mut b).map_err(|e| truncated(e, what))?;
        Ok(b)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.bytes::<1>(what)?[0])
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.bytes(what)?))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes(what)?))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.bytes(what)?))
    }
}

fn truncated(e: io::Error, what: &str) -> Error {
    if e.kind() == io::ErrorKind::UnexpectedEof {
        Error::Format(format!("file ends inside {what}"))
    } else {
        Error::Io(e)
    }
}

/// Parses a library written by [`write_library`].
pub fn read_library<R: Read>(input: R) -> Result<Vec<CompressedWaveform>> {
    let mut r = Reader { inner: input };
    if &r.bytes::<4>("magic")? != MAGIC {
        return Err(Error::Format("not a CWMF file".into()));
    }
    let version = r.u8("header")?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let code = r.u8("header")?;
    let kind = TransformKind::from_code(code)
        .ok_or_else(|| Error::Format(format!("unknown variant code {code}")))?;
    let ws_byte = r.u8("header")?;
    let variant = match kind {
        TransformKind::DctN if ws_byte == 0 => TransformVariant::dct_n(),
        TransformKind::DctN => {
            return Err(Error::Format("DCT-N library with a window size".into()))
        }
        _ => TransformVariant::new(
            kind,
            WindowSize::try_from(ws_byte as usize).map_err(|e| Error::Format(e.to_string()))?,
        ),
    };
    let scale = r.u16("header")?;
    if scale as u32 != variant.scale() {
        return Err(Error::Format(format!(
            "scale {scale} does not match variant {variant}"
        )));
    }
    let count = r.u32("header")?;
    let mut entries = Vec::with_capacity(count.min(1 << 16) as usize);
    for _ in 0..count {
        entries.push(read_entry(&mut r, variant)?);
    }
    let mut rest = [0u8; 1];
    match r.inner.read(&mut rest) {
        Ok(0) => Ok(entries),
        Ok(_) => Err(Error::Format("trailing bytes after last entry".into())),
        Err(e) => Err(Error::Io(e)),
    }
}

fn read_entry<R: Read>(r: &mut Reader<R>, variant: TransformVariant) -> Result<CompressedWaveform> {
    let label_len = r.u16("entry label")? as usize;
    let label = String::from_utf8(r.vec(label_len, "entry label")?)
        .map_err(|_| Error::Format("label is not UTF-8".into()))?;
    let length = r.u32("entry length")? as usize;
    if length == 0 {
        return Err(Error::Format(format!("entry {label:?} has zero length")));
    }
    let width = match r.u8("entry width")? {
        WIDTH_ESCAPE => r.u32("entry width")? as usize,
        w => w as usize,
    };
    let threshold = r.f64("entry threshold")?;
    let ws = variant.window_size().map_or(length, WindowSize::get);
    if width == 0 || width > ws {
        return Err(Error::Format(format!(
            "entry {label:?} has uniform width {width} outside 1..={ws}"
        )));
    }
    let windows = window_count(length, ws);
    let what = format!("windows of entry {label:?}");
    let windows = if variant.is_integer() {
        let raw = r.vec(2 * windows * width * 2, &what)?;
        let slots: Vec<i16> = raw
            .chunks_exact(2)
            .map(|b| i16::from_le_bytes([b[0], b[1]]))
            .collect();
        ChannelWindows::Int(split_windows(&slots, width, ws)?)
    } else {
        let raw = r.vec(2 * windows * width * 8, &what)?;
        let slots: Vec<f64> = raw
            .chunks_exact(8)
            .map(|b| f64::from_le_bytes(b.try_into().expect("8-byte chunk")))
            .collect();
        ChannelWindows::Float(split_windows(&slots, width, ws)?)
    };
    CompressedWaveform::from_parts(label, variant, ws, length, width, threshold, windows)
}

fn split_windows<T: Slot>(
    slots: &[T],
    width: usize,
    window_size: usize,
) -> Result<[Vec<CompressedWindow<T>>; 2]> {
    let mut i = Vec::new();
    let mut q = Vec::new();
    for (index, pair) in slots.chunks_exact(2 * width).enumerate() {
        i.push(CompressedWindow::from_slots(&pair[..width], window_size, index)?);
        q.push(CompressedWindow::from_slots(&pair[width..], window_size, index)?);
    }
    Ok([i, q])
}

/// Parses a library held in memory.
pub fn from_bytes(bytes: &[u8]) -> Result<Vec<CompressedWaveform>> {
    read_library(bytes)
}
