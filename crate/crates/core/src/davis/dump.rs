//! Binary dump of a [`WeightedComplex`].
//!
//! All fields are little-endian 64-bit words:
//!
//! ```text
//! magic "COXL2WC\0" | version = 1 | radius | bc (0 neumann, 1 dirichlet)
//! restriction code (0 full, 1 subcomplex, 2 pair) | restriction mask
//! generator count g | g × f64 weights
//! top dimension t | (t+1) × cell counts
//! for k in 0..=t: count_k × f64 gram
//! for k in 0..t: nnz | nnz × (u64 row, u64 col, f64 value)    -- d^k
//! for k in 0..=t: m | m × (u64 index or u64::MAX, u64 type mask, f64 chamber weight)
//! ```

use std::io::{Read, Write};

use super::sparse::Csr;
use super::weighted::{BoundaryCondition, IdentityCell, Restriction, WeightedComplex};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"COXL2WC\0";
const VERSION: u64 = 1;

pub fn write_weighted_complex<W: Write>(wc: &WeightedComplex, out: &mut W) -> Result<()> {
    let mut w = std::io::BufWriter::new(out);
    let u = |w: &mut std::io::BufWriter<&mut W>, x: u64| w.write_all(&x.to_le_bytes());
    let f = |w: &mut std::io::BufWriter<&mut W>, x: f64| w.write_all(&x.to_le_bytes());
    w.write_all(MAGIC)?;
    u(&mut w, VERSION)?;
    u(&mut w, wc.radius as u64)?;
    u(&mut w, matches!(wc.bc, BoundaryCondition::Dirichlet) as u64)?;
    let (code, mask) = wc.restriction.code();
    u(&mut w, code as u64)?;
    u(&mut w, mask)?;
    u(&mut w, wc.q.len() as u64)?;
    for &q in &wc.q {
        f(&mut w, q)?;
    }
    u(&mut w, wc.top_dim() as u64)?;
    for g in &wc.gram {
        u(&mut w, g.len() as u64)?;
    }
    for g in &wc.gram {
        for &x in g {
            f(&mut w, x)?;
        }
    }
    for d in &wc.d {
        u(&mut w, d.nnz() as u64)?;
        for r in 0..d.nrows {
            for (c, v) in d.row(r) {
                u(&mut w, r as u64)?;
                u(&mut w, c as u64)?;
                f(&mut w, v as f64)?;
            }
        }
    }
    for cells in &wc.identity {
        u(&mut w, cells.len() as u64)?;
        for c in cells {
            u(&mut w, c.index.map_or(u64::MAX, |i| i as u64))?;
            u(&mut w, c.t)?;
            f(&mut w, c.chamber)?;
        }
    }
    w.flush()?;
    Ok(())
}

struct Reader<R: Read> {
    r: R,
}

impl<R: Read> Reader<R> {
    fn u(&mut self) -> Result<u64> {
        let mut b = [0u8; 8];
        self.r.read_exact(&mut b)?;
        Ok(u64::from_le_bytes(b))
    }

    fn f(&mut self) -> Result<f64> {
        Ok(f64::from_bits(self.u()?))
    }

    fn len(&mut self, limit: u64) -> Result<usize> {
        let n = self.u()?;
        if n > limit {
            return Err(Error::Parse(format!("implausible length {n} in dump")));
        }
        Ok(n as usize)
    }
}

pub fn read_weighted_complex<R: Read>(input: R) -> Result<WeightedComplex> {
    let mut r = Reader {
        r: std::io::BufReader::new(input),
    };
    let mut magic = [0u8; 8];
    r.r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Parse("not a weighted complex dump".into()));
    }
    let version = r.u()?;
    if version != VERSION {
        return Err(Error::Parse(format!("unsupported dump version {version}")));
    }
    let radius = r.u()? as usize;
    let bc = match r.u()? {
        0 => BoundaryCondition::Neumann,
        1 => BoundaryCondition::Dirichlet,
        b => return Err(Error::Parse(format!("bad boundary tag {b}"))),
    };
    let code = r.u()?;
    let mask = r.u()?;
    let restriction = Restriction::from_code(code as u8, mask)?;
    let g = r.len(64)?;
    let q = (0..g).map(|_| r.f()).collect::<Result<Vec<_>>>()?;
    let top = r.len(64)?;
    let counts = (0..=top)
        .map(|_| r.len(u32::MAX as u64))
        .collect::<Result<Vec<_>>>()?;
    let gram = counts
        .iter()
        .map(|&n| (0..n).map(|_| r.f()).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut d = Vec::with_capacity(top);
    for k in 0..top {
        let nnz = r.len(u32::MAX as u64)?;
        let mut rows: Vec<Vec<(u32, i8)>> = vec![Vec::new(); counts[k + 1]];
        for _ in 0..nnz {
            let (row, col, v) = (r.u()? as usize, r.u()? as usize, r.f()?);
            if row >= counts[k + 1] || col >= counts[k] || (v != 1.0 && v != -1.0) {
                return Err(Error::Parse(format!(
                    "bad coboundary entry ({row}, {col}, {v})"
                )));
            }
            rows[row].push((col as u32, v as i8));
        }
        d.push(Csr::from_rows(counts[k], rows));
    }
    let mut identity = Vec::with_capacity(top + 1);
    for _ in 0..=top {
        let m = r.len(1 << 20)?;
        let cells = (0..m)
            .map(|_| {
                let index = r.u()?;
                Ok(IdentityCell {
                    index: (index != u64::MAX).then_some(index as usize),
                    t: r.u()?,
                    chamber: r.f()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        identity.push(cells);
    }
    Ok(WeightedComplex {
        radius,
        bc,
        restriction,
        q,
        d,
        gram,
        identity,
        cells: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::cycle;
    use crate::davis::CubeCatalog;
    use crate::racg::{CoxeterSystem, WeightAssignment};
    use crate::rational::q_frac;

    #[test]
    fn round_trip() {
        let sys = CoxeterSystem::from_complex(&cycle(6).unwrap()).unwrap();
        let cat = CubeCatalog::build(&sys, 3).unwrap();
        let q = WeightAssignment::uniform(6, q_frac(1, 5)).unwrap();
        let wc =
            WeightedComplex::assemble(&cat, &q, BoundaryCondition::Dirichlet, Restriction::Full)
                .unwrap();
        let mut buf = Vec::new();
        write_weighted_complex(&wc, &mut buf).unwrap();
        let back = read_weighted_complex(buf.as_slice()).unwrap();
        assert_eq!(back.d, wc.d);
        assert_eq!(back.gram, wc.gram);
        assert_eq!(back.identity, wc.identity);
        assert_eq!(
            (back.radius, back.bc, back.restriction),
            (3, BoundaryCondition::Dirichlet, Restriction::Full)
        );
        assert!(read_weighted_complex(&b"garbage!"[..]).is_err());
    }
}
