use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{KineticError, Result};
use crate::field::VelocityField;

/// Values of f on the periodic tensor grid x_i = -V + i h, i = 0..n, h = 2V/n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    pub dim: usize,
    pub n: usize,
    pub v_max: f64,
    pub h: f64,
    pub time: f64,
    /// Row-major: the last axis varies fastest.
    pub values: Vec<f64>,
}

const HEADER_BYTES: usize = 32;

impl GridField {
    pub fn zeros(dim: usize, n: usize, v_max: f64) -> Result<Self> {
        check_shape(dim, n, v_max)?;
        Ok(GridField { dim, n, v_max, h: 2.0 * v_max / n as f64, time: 0.0, values: vec![0.0; n.pow(dim as u32)] })
    }

    /// Samples a velocity field at the grid nodes.
    pub fn sample(f: &dyn VelocityField, n: usize, v_max: f64) -> Result<Self> {
        let mut g = Self::zeros(f.dim(), n, v_max)?;
        let mut v = vec![0.0; g.dim];
        for idx in 0..g.values.len() {
            g.node_into(idx, &mut v);
            let val = f.eval(&v);
            if !val.is_finite() {
                return Err(KineticError::Evaluation { at: v.clone(), value: val });
            }
            g.values[idx] = val;
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -self.v_max + i as f64 * self.h
    }

    /// Velocity of the node with flat index `idx`.
    pub fn node_into(&self, idx: usize, out: &mut [f64]) {
        let mut rest = idx;
        for axis in (0..self.dim).rev() {
            out[axis] = self.coordinate(rest % self.n);
            rest /= self.n;
        }
    }

    pub fn node(&self, idx: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        self.node_into(idx, &mut v);
        v
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    /// Largest value on nodes with some index equal to 0 or n - 1.
    pub fn boundary_max(&self) -> f64 {
        let n = self.n;
        let mut best: f64 = 0.0;
        for (idx, &val) in self.values.iter().enumerate() {
            let mut rest = idx;
            let mut edge = false;
            for _ in 0..self.dim {
                let i = rest % n;
                edge |= i == 0 || i == n - 1;
                rest /= n;
            }
            if edge {
                best = best.max(val.abs());
            }
        }
        best
    }

    /// Invariants: nonnegative values and a quiet boundary ring.
    pub fn validate(&self) -> Result<()> {
        check_shape(self.dim, self.n, self.v_max)?;
        if self.values.len() != self.n.pow(self.dim as u32) {
            return Err(KineticError::Format(format!(
                "payload has {} values, expected {}",
                self.values.len(),
                self.n.pow(self.dim as u32)
            )));
        }
        if (self.h - 2.0 * self.v_max / self.n as f64).abs() > 1e-12 * self.h {
            return Err(KineticError::Format(format!("spacing h = {} does not equal 2V/n", self.h)));
        }
        let max = self.max_value();
        for (i, &x) in self.values.iter().enumerate() {
            if !x.is_finite() || x < -1e-12 * max {
                return Err(KineticError::Configuration(format!("invalid grid value {x} at {:?}", self.node(i))));
            }
        }
        if self.boundary_max() > 1e-8 * max {
            return Err(KineticError::Configuration(format!(
                "boundary values reach {} > 1e-8 of the maximum {max}; enlarge V",
                self.boundary_max()
            )));
        }
        Ok(())
    }

    /// Header: u64 d, u64 n, f64 V, f64 h (little endian); payload: row-major f64.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&(self.dim as u64).to_le_bytes())?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        w.write_all(&self.v_max.to_le_bytes())?;
        w.write_all(&self.h.to_le_bytes())?;
        for x in &self.values {
            w.write_all(&x.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut header = [0u8; HEADER_BYTES];
        r.read_exact(&mut header).map_err(|e| KineticError::Format(format!("truncated header: {e}")))?;
        let word = |k: usize| {
            let mut b = [0u8; 8];
            b.copy_from_slice(&header[8 * k..8 * k + 8]);
            b
        };
        let dim = u64::from_le_bytes(word(0)) as usize;
        let n = u64::from_le_bytes(word(1)) as usize;
        let v_max = f64::from_le_bytes(word(2));
        let h = f64::from_le_bytes(word(3));
        check_shape(dim, n, v_max).map_err(|e| KineticError::Format(e.to_string()))?;
        let count = n.pow(dim as u32);
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() != 8 * count {
            return Err(KineticError::Format(format!(
                "payload has {} bytes, expected {}",
                bytes.len(),
                8 * count
            )));
        }
        let values = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
            .collect();
        let g = GridField { dim, n, v_max, h, time: 0.0, values };
        if (g.h - 2.0 * v_max / n as f64).abs() > 1e-12 * g.h {
            return Err(KineticError::Format(format!("spacing h = {h} does not equal 2V/n")));
        }
        Ok(g)
    }
}

fn check_shape(dim: usize, n: usize, v_max: f64) -> Result<()> {
    if dim != 3 {
        return Err(KineticError::Unsupported(format!("grid solver is three-dimensional, got d = {dim}")));
    }
    if n < 4 || n % 2 != 0 {
        return Err(KineticError::Argument(format!("points per axis must be even and >= 4, got {n}")));
    }
    if !(v_max > 0.0) || !v_max.is_finite() {
        return Err(KineticError::Argument(format!("half width V must be positive, got {v_max}")));
    }
    Ok(())
}
