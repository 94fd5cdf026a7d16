//! File formats: dense-matrix/mask CSV, binary PGM images, and the
//! per-iteration trace CSVs.
//!
//! Matrix CSV: a `rows,cols` header line, then one comma-separated line
//! per row. PGM: binary `P5`, maxval 255, quantization applied only at
//! write time. Floats print in shortest round-trip form with `.`
//! decimal separator; infinities print as `inf`.

use crate::error::{Error, Result};
use crate::gcosamp::RecoveryTrace;
use crate::linalg::DenseMatrix;
use crate::sacosamp::SacosampTrace;
use std::io::{Read, Write};
use std::path::Path;

pub fn format_float(v: f64) -> String {
    format!("{v}")
}

fn format_optional(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

pub fn write_matrix_csv(path: &Path, matrix: &DenseMatrix) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("{},{}\n", matrix.rows, matrix.cols));
    for i in 0..matrix.rows {
        let row: Vec<String> = matrix.row(i).iter().map(|&v| format_float(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_matrix_csv(path: &Path) -> Result<DenseMatrix> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::parse("empty matrix CSV"))?;
    let dims: Vec<&str> = header.split(',').collect();
    if dims.len() != 2 {
        return Err(Error::parse(format!("bad matrix CSV header: {header}")));
    }
    let rows: usize = dims[0]
        .trim()
        .parse()
        .map_err(|_| Error::parse("bad row count"))?;
    let cols: usize = dims[1]
        .trim()
        .parse()
        .map_err(|_| Error::parse("bad column count"))?;
    let mut data = Vec::with_capacity(rows * cols);
    for line in lines {
        for field in line.split(',') {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad numeric field: {field}")))?;
            data.push(v);
        }
    }
    DenseMatrix::new(rows, cols, data)
}

/// Binary PGM (P5, maxval 255). Values are clamped to [0, 255] and
/// rounded at write time.
pub fn write_pgm(path: &Path, pixels: &[f64], height: usize, width: usize) -> Result<()> {
    if pixels.len() != height * width {
        return Err(Error::Shape {
            context: "write_pgm",
            expected: height * width,
            got: pixels.len(),
        });
    }
    let mut file = std::fs::File::create(path)?;
    write!(file, "P5\n{width} {height}\n255\n")?;
    let bytes: Vec<u8> = pixels
        .iter()
        .map(|&v| v.round().clamp(0.0, 255.0) as u8)
        .collect();
    file.write_all(&bytes)?;
    Ok(())
}

pub fn read_pgm(path: &Path) -> Result<(usize, usize, Vec<f64>)> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    let mut pos = 0usize;
    let mut token = || -> Result<String> {
        // skip whitespace and # comments
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::parse("truncated PGM header"));
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };
    let magic = token()?;
    if magic != "P5" {
        return Err(Error::parse(format!("unsupported PGM magic: {magic}")));
    }
    let width: usize = token()?.parse().map_err(|_| Error::parse("bad PGM width"))?;
    let height: usize = token()?
        .parse()
        .map_err(|_| Error::parse("bad PGM height"))?;
    let maxval: usize = token()?
        .parse()
        .map_err(|_| Error::parse("bad PGM maxval"))?;
    if maxval != 255 {
        return Err(Error::parse("only maxval 255 PGM is supported"));
    }
    pos += 1; // single whitespace after maxval
    if bytes.len() < pos + width * height {
        return Err(Error::parse("truncated PGM payload"));
    }
    let pixels = bytes[pos..pos + width * height]
        .iter()
        .map(|&b| b as f64)
        .collect();
    Ok((height, width, pixels))
}

/// Trace CSV: one row per iteration, then a `halt,<reason>` line.
pub fn write_trace_csv(path: &Path, trace: &RecoveryTrace) -> Result<()> {
    let mut out = String::from("t,residual_norm,error_norm,intermediate_error_norm,subspace_dim\n");
    for rec in &trace.iterations {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            rec.t,
            format_float(rec.residual_norm),
            format_optional(rec.error_norm),
            format_optional(rec.intermediate_error_norm),
            rec.subspace_dim
        ));
    }
    out.push_str(&format!("halt,{}\n", trace.halt.as_str()));
    std::fs::write(path, out)?;
    Ok(())
}

/// Combined-model trace CSV: the recovery columns plus support size,
/// cosupport size, and the per-iteration PSNR of the analysis part.
pub fn write_sacosamp_trace_csv(path: &Path, trace: &SacosampTrace) -> Result<()> {
    let mut out = String::from(
        "t,residual_norm,error_norm,intermediate_error_norm,subspace_dim,|T|,|Λ|,psnr_x2\n",
    );
    for rec in &trace.iterations {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            rec.t,
            format_float(rec.residual_norm),
            format_optional(rec.error_norm),
            format_optional(rec.intermediate_error_norm),
            rec.subspace_dim,
            rec.support_size,
            rec.cosupport_size,
            format_optional(rec.psnr_x2)
        ));
    }
    out.push_str(&format!("halt,{}\n", trace.halt.as_str()));
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{derived_rng, standard_normal_vec};

    #[test]
    fn matrix_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let mut rng = derived_rng(1, &[]);
        let m = DenseMatrix::new(3, 4, standard_normal_vec(&mut rng, 12)).unwrap();
        write_matrix_csv(&path, &m).unwrap();
        let back = read_matrix_csv(&path).unwrap();
        assert_eq!(m, back);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("3,4\n"));
    }

    #[test]
    fn pgm_round_trip_quantizes_to_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.pgm");
        let pixels = vec![0.0, 10.4, 10.6, 300.0, -5.0, 255.0];
        write_pgm(&path, &pixels, 2, 3).unwrap();
        let (h, w, back) = read_pgm(&path).unwrap();
        assert_eq!((h, w), (2, 3));
        assert_eq!(back, vec![0.0, 10.0, 11.0, 255.0, 0.0, 255.0]);
    }

    #[test]
    fn trace_csv_schema() {
        use crate::gcosamp::{HaltReason, IterationRecord, RecoveryTrace};
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        let trace = RecoveryTrace {
            iterations: vec![IterationRecord {
                t: 1,
                residual_norm: 0.5,
                error_norm: Some(0.25),
                intermediate_error_norm: None,
                subspace_dim: 7,
                ls_converged: true,
                ls_orthogonality: 0.0,
                membership_drift: 0.0,
            }],
            estimate: vec![],
            halt: HaltReason::Stagnation,
            initial_residual: 1.0,
        };
        write_trace_csv(&path, &trace).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "t,residual_norm,error_norm,intermediate_error_norm,subspace_dim"
        );
        assert_eq!(lines[1], "1,0.5,0.25,,7");
        assert_eq!(lines[2], "halt,stagnation");
    }
}
