//! Text renderings of Pascal objects: plain PBM (P1) bitmaps with filled
//! cells as 1s, and an ASCII grid showing residues.

use std::fmt::Write;

use crate::matrix::FpMatrix;

const PBM_LINE: usize = 70;

/// Values recorded in the PBM comment line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderHeader {
    pub p: u32,
    pub m: u32,
    pub dim: usize,
    pub layer: Option<usize>,
}

impl RenderHeader {
    fn comment(&self) -> String {
        let layer = self
            .layer
            .map_or_else(|| "none".to_string(), |t| t.to_string());
        format!("# p={} m={} dim={} layer={}", self.p, self.m, self.dim, layer)
    }
}

/// Plain PBM: `P1`, the comment line, `width height`, then one line of
/// bits per matrix row (rows longer than 70 bits continue on further lines).
pub fn to_pbm(matrix: &FpMatrix, header: &RenderHeader) -> String {
    let mut out = String::new();
    out.push_str("P1\n");
    out.push_str(&header.comment());
    out.push('\n');
    let _ = writeln!(out, "{} {}", matrix.cols(), matrix.rows());
    for i in 0..matrix.rows() {
        let bits: Vec<u8> = matrix
            .row(i)
            .iter()
            .map(|&x| if x != 0 { b'1' } else { b'0' })
            .collect();
        for chunk in bits.chunks(PBM_LINE) {
            out.push_str(std::str::from_utf8(chunk).expect("ascii digits"));
            out.push('\n');
        }
    }
    out
}

/// Residue grid with `.` for zero. Single characters for p ≤ 10, otherwise
/// space-separated, right-aligned columns.
pub fn to_ascii(matrix: &FpMatrix) -> String {
    let p = matrix.prime().get();
    let width = (p - 1).to_string().len();
    let mut out = String::new();
    for i in 0..matrix.rows() {
        let cells: Vec<String> = matrix
            .row(i)
            .iter()
            .map(|&x| {
                let s = if x == 0 { ".".to_string() } else { x.to_string() };
                format!("{s:>width$}")
            })
            .collect();
        out.push_str(&cells.join(if width == 1 { "" } else { " " }));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Prime;

    #[test]
    fn pbm_layout() {
        let p = Prime::new(2).unwrap();
        let b = FpMatrix::from_rows(p, &[vec![1, 0], vec![1, 1]]);
        let header = RenderHeader {
            p: 2,
            m: 1,
            dim: 2,
            layer: None,
        };
        assert_eq!(to_pbm(&b, &header), "P1\n# p=2 m=1 dim=2 layer=none\n2 2\n10\n11\n");
    }

    #[test]
    fn long_rows_wrap() {
        let p = Prime::new(2).unwrap();
        let b = FpMatrix::from_fn(p, 1, 100, |_, _| 1);
        let header = RenderHeader {
            p: 2,
            m: 1,
            dim: 2,
            layer: Some(0),
        };
        let text = to_pbm(&b, &header);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[3].len(), 70);
        assert_eq!(lines[4].len(), 30);
    }

    #[test]
    fn ascii_grids() {
        let p3 = Prime::new(3).unwrap();
        let b = FpMatrix::from_rows(p3, &[vec![1, 0, 0], vec![1, 1, 0], vec![1, 2, 1]]);
        assert_eq!(to_ascii(&b), "1..\n11.\n121\n");
        let p11 = Prime::new(11).unwrap();
        let c = FpMatrix::from_rows(p11, &[vec![10, 0]]);
        assert_eq!(to_ascii(&c), "10  .\n");
    }
}
