//! Carry real audio through the simulated link: WAV in, bits through the
//! modem and channel, WAV out, with reconstruction fidelity quantified.
//!
//! The container is deliberately narrow — RIFF/WAVE, PCM format code 1,
//! 16-bit, mono, canonical 44-byte header — so the parser stays small and
//! every error can name the offending field or byte offset. Bits travel
//! least-significant-first within each 16-bit sample word, a fixed order
//! that makes bit-error counts comparable across implementations.

use crate::analysis::{Scheme, SnrSpec};
use crate::channel::{awgn_complex, awgn_vector, NoiseSpec};
use crate::modem::{
    build_psk, build_qam, demodulate_ml, fsk_demodulate, fsk_modulate, modulate, BitStream,
    FskSignalSet, ModemError,
};
use crate::montecarlo::{is_supported, supported_orders};
use serde::Serialize;
use std::fs;
use std::io;
use std::path::Path;

/// Errors from WAV handling and the transmit pipeline.
#[derive(Debug, thiserror::Error)]
pub enum PayloadError {
    #[error(transparent)]
    Io(#[from] io::Error),
    /// Structurally broken file: truncation, bad magic, missing chunks.
    #[error("WAV parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    /// Well-formed file in a format this pipeline does not carry.
    #[error("unsupported WAV format: {field} must be {expected}, got {got}")]
    UnsupportedFormat {
        field: &'static str,
        expected: &'static str,
        got: String,
    },
    /// Fewer decoded bits than the template needs.
    #[error("bit stream holds {got} bits but the template needs {expected}")]
    ShortBitStream { expected: usize, got: usize },
    #[error("scheme {scheme} does not support m = {m} (supported: {supported:?})")]
    Unsupported {
        scheme: Scheme,
        m: u32,
        supported: &'static [u32],
    },
    #[error("Eb/N0 must not be NaN or -inf, got {0}")]
    InvalidSnr(f64),
    #[error(transparent)]
    Modem(#[from] ModemError),
}

// ---------------------------------------------------------------------------
// Audio payloads and WAV bytes
// ---------------------------------------------------------------------------

/// A 16-bit mono PCM clip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AudioPayload {
    pub samples: Vec<i16>,
    pub sample_rate_hz: u32,
    /// Always 1; kept explicit so reports and headers are self-describing.
    pub channels: u16,
}

impl AudioPayload {
    pub fn mono(samples: Vec<i16>, sample_rate_hz: u32) -> Self {
        AudioPayload {
            samples,
            sample_rate_hz,
            channels: 1,
        }
    }
}

const HEADER_LEN: usize = 44;

fn u16le(buf: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([buf[at], buf[at + 1]])
}

fn u32le(buf: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([buf[at], buf[at + 1], buf[at + 2], buf[at + 3]])
}

fn need(buf: &[u8], at: usize, n: usize, what: &str) -> Result<(), PayloadError> {
    if at.checked_add(n).is_none_or(|end| end > buf.len()) {
        return Err(PayloadError::Parse {
            offset: at,
            message: format!(
                "truncated: need {n} bytes for {what}, file has {}",
                buf.len()
            ),
        });
    }
    Ok(())
}

/// Encode a payload as canonical 44-byte-header PCM WAV bytes.
pub fn encode_wav(p: &AudioPayload) -> Result<Vec<u8>, PayloadError> {
    if p.channels != 1 {
        return Err(PayloadError::UnsupportedFormat {
            field: "channels",
            expected: "1 (mono)",
            got: p.channels.to_string(),
        });
    }
    if p.sample_rate_hz == 0 {
        return Err(PayloadError::UnsupportedFormat {
            field: "sample_rate_hz",
            expected: "positive",
            got: "0".into(),
        });
    }
    let data_len = p.samples.len() * 2;
    let mut out = Vec::with_capacity(HEADER_LEN + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes()); // fmt chunk size
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&p.sample_rate_hz.to_le_bytes());
    out.extend_from_slice(&(p.sample_rate_hz * 2).to_le_bytes()); // byte rate
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes()); // bits per sample
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for s in &p.samples {
        out.extend_from_slice(&s.to_le_bytes());
    }
    Ok(out)
}

/// Decode PCM WAV bytes. Unknown chunks are skipped; the format chunk
/// must describe 16-bit mono PCM or the offending field is reported.
pub fn decode_wav(bytes: &[u8]) -> Result<AudioPayload, PayloadError> {
    need(bytes, 0, 12, "RIFF header")?;
    if &bytes[0..4] != b"RIFF" {
        return Err(PayloadError::Parse {
            offset: 0,
            message: "missing RIFF magic".into(),
        });
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(PayloadError::Parse {
            offset: 8,
            message: "missing WAVE form type".into(),
        });
    }

    let mut fmt: Option<(u16, u16, u32, u16)> = None; // format, channels, rate, bits
    let mut data: Option<(usize, usize)> = None; // offset, len
    let mut at = 12usize;
    while at < bytes.len() {
        need(bytes, at, 8, "chunk header")?;
        let id = &bytes[at..at + 4];
        let size = u32le(bytes, at + 4) as usize;
        let body = at + 8;
        need(bytes, body, size, "chunk body")?;
        match id {
            b"fmt " => {
                need(bytes, body, 16, "fmt fields")?;
                fmt = Some((
                    u16le(bytes, body),
                    u16le(bytes, body + 2),
                    u32le(bytes, body + 4),
                    u16le(bytes, body + 14),
                ));
            }
            b"data" => {
                data = Some((body, size));
                break; // canonical layout: nothing we need follows
            }
            _ => {} // skip chunks like LIST/INFO
        }
        at = body + size + (size & 1); // chunks are word-aligned
    }

    let (audio_format, channels, sample_rate_hz, bits_per_sample) =
        fmt.ok_or(PayloadError::Parse {
            offset: bytes.len(),
            message: "no fmt chunk".into(),
        })?;
    let (data_at, data_len) = data.ok_or(PayloadError::Parse {
        offset: bytes.len(),
        message: "no data chunk".into(),
    })?;

    if audio_format != 1 {
        return Err(PayloadError::UnsupportedFormat {
            field: "audio_format",
            expected: "1 (PCM)",
            got: audio_format.to_string(),
        });
    }
    if channels != 1 {
        return Err(PayloadError::UnsupportedFormat {
            field: "channels",
            expected: "1 (mono)",
            got: channels.to_string(),
        });
    }
    if bits_per_sample != 16 {
        return Err(PayloadError::UnsupportedFormat {
            field: "bits_per_sample",
            expected: "16",
            got: bits_per_sample.to_string(),
        });
    }
    if sample_rate_hz == 0 {
        return Err(PayloadError::UnsupportedFormat {
            field: "sample_rate_hz",
            expected: "positive",
            got: "0".into(),
        });
    }
    if data_len % 2 != 0 {
        return Err(PayloadError::Parse {
            offset: data_at,
            message: format!("data length {data_len} is not whole 16-bit samples"),
        });
    }

    let samples = bytes[data_at..data_at + data_len]
        .chunks_exact(2)
        .map(|b| i16::from_le_bytes([b[0], b[1]]))
        .collect();
    Ok(AudioPayload {
        samples,
        sample_rate_hz,
        channels,
    })
}

/// Read a 16-bit mono PCM WAV file.
pub fn wav_read(path: impl AsRef<Path>) -> Result<AudioPayload, PayloadError> {
    decode_wav(&fs::read(path)?)
}

/// Write a payload as a canonical PCM WAV file (atomically: temp file in
/// place, then rename).
pub fn wav_write(path: impl AsRef<Path>, p: &AudioPayload) -> Result<(), PayloadError> {
    let bytes = encode_wav(p)?;
    write_atomic(path.as_ref(), &bytes)?;
    Ok(())
}

/// Write bytes to `path` via a temp file and rename, so readers never
/// observe a half-written artifact. Writes are exclusive per path.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

// ---------------------------------------------------------------------------
// Bits <-> samples
// ---------------------------------------------------------------------------

/// Serialize samples to bits, least-significant bit of each 16-bit word
/// first, samples in order.
pub fn payload_to_bits(p: &AudioPayload) -> BitStream {
    let mut bits = Vec::with_capacity(p.samples.len() * 16);
    for &s in &p.samples {
        let w = s as u16;
        for b in 0..16 {
            bits.push(w >> b & 1 == 1);
        }
    }
    BitStream::from_bits(bits)
}

/// Rebuild a payload from bits; the template supplies the sample count
/// and metadata. Bits beyond the template's need (padding) are ignored.
pub fn bits_to_payload(
    bits: &BitStream,
    template: &AudioPayload,
) -> Result<AudioPayload, PayloadError> {
    let needed = template.samples.len() * 16;
    if bits.bits.len() < needed {
        return Err(PayloadError::ShortBitStream {
            expected: needed,
            got: bits.bits.len(),
        });
    }
    let samples = bits.bits[..needed]
        .chunks_exact(16)
        .map(|word| {
            let mut w = 0u16;
            for (b, &bit) in word.iter().enumerate() {
                w |= (bit as u16) << b;
            }
            w as i16
        })
        .collect();
    Ok(AudioPayload {
        samples,
        sample_rate_hz: template.sample_rate_hz,
        channels: template.channels,
    })
}

/// Deterministic voice stand-in: a Hann-enveloped 220 Hz tone over a
/// rising chirp. Same arguments, same samples, every time.
pub fn voice_fixture(n_samples: usize, sample_rate_hz: u32) -> AudioPayload {
    let rate = sample_rate_hz as f64;
    let duration = n_samples as f64 / rate;
    let samples = (0..n_samples)
        .map(|i| {
            let t = i as f64 / rate;
            let env = 0.5 * (1.0 - (2.0 * std::f64::consts::PI * t / duration.max(1e-9)).cos());
            let tone = 9000.0 * env * (2.0 * std::f64::consts::PI * 220.0 * t).sin();
            let chirp = 4000.0 * (2.0 * std::f64::consts::PI * (300.0 * t + 200.0 * t * t)).sin();
            (tone + chirp).round() as i16
        })
        .collect();
    AudioPayload::mono(samples, sample_rate_hz)
}

// ---------------------------------------------------------------------------
// The end-to-end pipeline
// ---------------------------------------------------------------------------

/// Source/channel coding seam. The default is the identity on both
/// sides; a real coder can be slotted in without touching the pipeline.
pub trait BitCodec {
    fn encode(&self, bits: &BitStream) -> BitStream;
    fn decode(&self, bits: &BitStream) -> BitStream;
}

/// The identity pass-through coder.
pub struct IdentityCodec;

impl BitCodec for IdentityCodec {
    fn encode(&self, bits: &BitStream) -> BitStream {
        bits.clone()
    }

    fn decode(&self, bits: &BitStream) -> BitStream {
        bits.clone()
    }
}

/// Serialize an f64 that may legitimately be non-finite: JSON has no
/// infinity, so `inf` becomes the string "inf" instead of a silent null.
pub(crate) fn serialize_f64_total<S: serde::Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.collect_str(v)
    }
}

/// What one transmission did to the payload.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransmissionReport {
    pub scheme: Scheme,
    pub m: u32,
    /// Eb/N0 in dB; infinite means the noiseless channel.
    #[serde(serialize_with = "serialize_f64_total")]
    pub eb_n0_db: f64,
    pub seed: u64,
    /// Errors among the payload bits (padding excluded, so zero errors
    /// is exactly equivalent to a bit-perfect reconstruction).
    pub bit_errors: u64,
    pub total_bits: u64,
    pub ber: f64,
    /// Mean squared error over the 16-bit samples.
    pub sample_mse: f64,
    pub max_abs_sample_error: u32,
}

/// Push a payload through bits → modulate → AWGN → ML demodulation →
/// payload, and measure what came back. `eb_n0_db` is per-bit SNR;
/// `+∞` selects the noiseless pass-through.
pub fn transmit_pipeline(
    payload: &AudioPayload,
    scheme: Scheme,
    m: u32,
    eb_n0_db: f64,
    seed: u64,
) -> Result<(AudioPayload, TransmissionReport), PayloadError> {
    transmit_with_codec(payload, scheme, m, eb_n0_db, seed, &IdentityCodec)
}

/// [`transmit_pipeline`] with an explicit coder in the seam.
pub fn transmit_with_codec(
    payload: &AudioPayload,
    scheme: Scheme,
    m: u32,
    eb_n0_db: f64,
    seed: u64,
    codec: &dyn BitCodec,
) -> Result<(AudioPayload, TransmissionReport), PayloadError> {
    if !is_supported(scheme, m) {
        return Err(PayloadError::Unsupported {
            scheme,
            m,
            supported: supported_orders(scheme),
        });
    }
    let k = m.trailing_zeros();
    let snr = SnrSpec::new(eb_n0_db, k).map_err(|_| PayloadError::InvalidSnr(eb_n0_db))?;
    let noise = NoiseSpec::from_snr(&snr, 1.0, seed);

    let source_bits = payload_to_bits(payload);
    let coded = codec.encode(&source_bits).padded(k);

    let raw = match scheme {
        Scheme::Psk | Scheme::Qam => {
            let c = if scheme == Scheme::Psk {
                build_psk(m)?
            } else {
                build_qam(m)?
            };
            let tx = modulate(&coded, &c)?;
            demodulate_ml(&awgn_complex(&tx, &noise), &c)
        }
        Scheme::Fsk => {
            let s = FskSignalSet::new(m)?;
            let tx = fsk_modulate(&coded, &s)?;
            fsk_demodulate(&awgn_vector(&tx, &noise), &s)?
        }
    };

    let received = BitStream {
        bits: raw.bits[..coded.original_length].to_vec(),
        original_length: coded.original_length,
    };
    let decoded = codec.decode(&received);
    let reconstructed = bits_to_payload(&decoded, payload)?;

    let total_bits = source_bits.original_length as u64;
    let bit_errors = source_bits
        .bits
        .iter()
        .zip(&decoded.bits)
        .filter(|(a, b)| a != b)
        .count() as u64;
    let mut sq_sum = 0.0f64;
    let mut max_abs = 0u32;
    for (&a, &b) in payload.samples.iter().zip(&reconstructed.samples) {
        let d = (a as i32 - b as i32).unsigned_abs();
        max_abs = max_abs.max(d);
        sq_sum += (d as f64) * (d as f64);
    }
    let n = payload.samples.len().max(1) as f64;
    let report = TransmissionReport {
        scheme,
        m,
        eb_n0_db,
        seed,
        bit_errors,
        total_bits,
        ber: if total_bits == 0 {
            0.0
        } else {
            bit_errors as f64 / total_bits as f64
        },
        sample_mse: sq_sum / n,
        max_abs_sample_error: max_abs,
    };
    Ok((reconstructed, report))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
