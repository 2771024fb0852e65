use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo_env::{uniform_points, Route};

/// Largest supported bits per ordinate; codes stay exact in `f64`.
pub const MAX_RESOLUTION: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    #[default]
    Binary,
    Gray,
}

/// `m * n` bits: `n` bits per free ordinate, most significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chromosome {
    bits: Vec<bool>,
    resolution: u32,
}

impl Chromosome {
    pub fn new(bits: Vec<bool>, resolution: u32) -> Result<Self> {
        if resolution == 0 || resolution > MAX_RESOLUTION {
            return Err(Error::invalid(format!(
                "resolution {resolution} outside 1..={MAX_RESOLUTION}"
            )));
        }
        if bits.is_empty() || !bits.len().is_multiple_of(resolution as usize) {
            return Err(Error::invalid(format!(
                "{} bits is not a positive multiple of resolution {resolution}",
                bits.len()
            )));
        }
        Ok(Chromosome { bits, resolution })
    }

    /// Chromosome holding the given raw integer codes.
    pub fn from_codes(codes: &[u64], resolution: u32) -> Result<Self> {
        let n = resolution as usize;
        let mut bits = Vec::with_capacity(codes.len() * n);
        for &code in codes {
            if resolution < 64 && code >> resolution != 0 {
                return Err(Error::invalid(format!("code {code} needs more than {resolution} bits")));
            }
            bits.extend((0..n).rev().map(|k| (code >> k) & 1 == 1));
        }
        Chromosome::new(bits, resolution)
    }

    /// Bits of `index` split into `ordinates` codes, MSB first overall.
    pub fn from_index(index: u64, ordinates: usize, resolution: u32) -> Result<Self> {
        let total = ordinates * resolution as usize;
        let bits = (0..total).rev().map(|k| (index >> k) & 1 == 1).collect();
        Chromosome::new(bits, resolution)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub(crate) fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn ordinate_count(&self) -> usize {
        self.bits.len() / self.resolution as usize
    }

    /// Raw integer value of each `n`-bit group.
    pub fn raw_codes(&self) -> Vec<u64> {
        self.bits
            .chunks(self.resolution as usize)
            .map(|c| c.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
            .collect()
    }

    /// Positional codes after undoing the encoding.
    pub fn codes(&self, encoding: Encoding) -> Vec<u64> {
        let raw = self.raw_codes();
        match encoding {
            Encoding::Binary => raw,
            Encoding::Gray => raw.into_iter().map(gray_to_binary).collect(),
        }
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

pub fn gray_to_binary(mut g: u64) -> u64 {
    let mut shift = 1;
    while shift < 64 {
        g ^= g >> shift;
        shift <<= 1;
    }
    g
}

pub fn binary_to_gray(b: u64) -> u64 {
    b ^ (b >> 1)
}

fn max_code(resolution: u32) -> f64 {
    ((1u64 << resolution) - 1) as f64
}

/// Ordinate for code `k`: `-span + k * 2 span / (2^n - 1)`.
pub fn code_to_ordinate(code: u64, resolution: u32, span: f64) -> f64 {
    let top = (1u64 << resolution) - 1;
    if code == 0 {
        return -span;
    }
    if code == top {
        return span;
    }
    -span + code as f64 * (2.0 * span) / max_code(resolution)
}

/// Nearest code to `y`, clamped to the representable range.
pub fn ordinate_to_code(y: f64, resolution: u32, span: f64) -> u64 {
    let k = ((y + span) * max_code(resolution) / (2.0 * span)).round();
    k.clamp(0.0, max_code(resolution)) as u64
}

pub fn decode_ordinates(c: &Chromosome, span: f64, encoding: Encoding) -> Vec<f64> {
    c.codes(encoding)
        .into_iter()
        .map(|k| code_to_ordinate(k, c.resolution, span))
        .collect()
}

pub fn decode(c: &Chromosome, span: f64, encoding: Encoding) -> Route {
    let ys = decode_ordinates(c, span, encoding);
    Route::new(uniform_points(span, &ys), span).expect("decoded ordinates lie within [-span, span]")
}

pub fn encode_ordinates(ys: &[f64], span: f64, resolution: u32, encoding: Encoding) -> Result<Chromosome> {
    let codes: Vec<u64> = ys
        .iter()
        .map(|&y| {
            let k = ordinate_to_code(y, resolution, span);
            match encoding {
                Encoding::Binary => k,
                Encoding::Gray => binary_to_gray(k),
            }
        })
        .collect();
    Chromosome::from_codes(&codes, resolution)
}

/// Area of one search cell, `d^2 / (m * 2^(n-1))`.
pub fn cell_area(span: f64, free_waypoints: usize, resolution: u32) -> f64 {
    span * span / (free_waypoints as f64 * 2f64.powi(resolution as i32 - 1))
}

/// Ordinate spacing between adjacent codes.
pub fn decoding_step(span: f64, resolution: u32) -> f64 {
    2.0 * span / max_code(resolution)
}
