//! Binary reflected Gray labeling of 2^m-PAM.
//!
//! Points are indexed `i = 0 .. 2^m` from most negative to most positive,
//! value `2i − (2^m − 1)`, label `i ^ (i >> 1)`. Bit `b_1` (the label MSB)
//! is the sign bit: `1` for positive points. The reflection property makes
//! the remaining `m − 1` bits a function of the magnitude only.

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelingMap {
    m: u32,
    /// label per point index
    labels: Vec<u32>,
    /// point index per label
    points: Vec<usize>,
}

impl LabelingMap {
    pub fn gray(m: u32) -> Result<Self> {
        if !(1..=12).contains(&m) {
            return Err(Error::InvalidParameter(format!("unsupported bit levels m = {m}")));
        }
        let size = 1usize << m;
        let labels: Vec<u32> = (0..size as u32).map(|i| i ^ (i >> 1)).collect();
        let mut points = vec![0usize; size];
        for (i, &l) in labels.iter().enumerate() {
            points[l as usize] = i;
        }
        Ok(Self { m, labels, points })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Integer PAM value of point `i`.
    pub fn point_value(&self, index: usize) -> i32 {
        2 * index as i32 - (self.size() as i32 - 1)
    }

    pub fn point_values(&self) -> Vec<i32> {
        (0..self.size()).map(|i| self.point_value(i)).collect()
    }

    pub fn label_of_index(&self, index: usize) -> u32 {
        self.labels[index]
    }

    pub fn label_of_value(&self, value: i32) -> Option<u32> {
        let shifted = value + self.size() as i32 - 1;
        if shifted < 0 || shifted % 2 != 0 || shifted as usize / 2 >= self.size() {
            return None;
        }
        Some(self.labels[shifted as usize / 2])
    }

    pub fn value_of_label(&self, label: u32) -> i32 {
        self.point_value(self.points[label as usize])
    }

    /// Bit `level` (0 = MSB = sign) of a label.
    pub fn bit(&self, label: u32, level: usize) -> u8 {
        ((label >> (self.m as usize - 1 - level)) & 1) as u8
    }

    /// The `m − 1` amplitude bits (levels 1..m) of a positive amplitude.
    pub fn amplitude_label(&self, amplitude: u32) -> u32 {
        let label = self.label_of_value(amplitude as i32).expect("amplitude in range");
        label & ((1 << (self.m - 1)) - 1)
    }

    /// Magnitude for a given amplitude label.
    pub fn amplitude_of_label(&self, amplitude_label: u32) -> u32 {
        let sign = 1u32 << (self.m - 1);
        self.value_of_label(sign | amplitude_label) as u32
    }

    /// Signed point from a sign bit (`1` ⇒ positive) and a magnitude.
    pub fn signed(&self, sign_bit: u8, amplitude: u32) -> i32 {
        if sign_bit == 1 { amplitude as i32 } else { -(amplitude as i32) }
    }
}
