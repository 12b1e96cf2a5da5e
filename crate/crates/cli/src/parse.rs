//! Input parsing: matrices and vectors arrive either as comma-separated
//! numbers or as the named basis symbols e1..e4.

use gl2geo::algebra::AlgebraVector;
use gl2geo::mat2::Mat2;

#[derive(Debug)]
pub struct ParseError(pub String);

fn parse_numbers(s: &str, n: usize, what: &str) -> Result<Vec<f64>, ParseError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(ParseError(format!(
            "{what}: expected {n} comma-separated numbers, got {}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| ParseError(format!("{what}: `{p}` is not a number")))
        })
        .collect()
}

fn basis_symbol(s: &str) -> Option<AlgebraVector> {
    match s.trim() {
        "e1" => Some(AlgebraVector::basis(0)),
        "e2" => Some(AlgebraVector::basis(1)),
        "e3" => Some(AlgebraVector::basis(2)),
        "e4" => Some(AlgebraVector::basis(3)),
        _ => None,
    }
}

/// An algebra element given by matrix entries a,b,c,d (row-major) or a
/// basis symbol.
pub fn parse_matrix_vector(s: &str, what: &str) -> Result<AlgebraVector, ParseError> {
    if let Some(v) = basis_symbol(s) {
        return Ok(v);
    }
    let x = parse_numbers(s, 4, what)?;
    Ok(AlgebraVector::from_matrix(Mat2::new(
        x[0], x[1], x[2], x[3],
    )))
}

/// An algebra element given by frame coefficients f1,f2,f3,f4 or a
/// basis symbol.
pub fn parse_coefficient_vector(s: &str, what: &str) -> Result<AlgebraVector, ParseError> {
    if let Some(v) = basis_symbol(s) {
        return Ok(v);
    }
    let x = parse_numbers(s, 4, what)?;
    Ok(AlgebraVector::from_coeffs([x[0], x[1], x[2], x[3]]))
}

/// Coefficient 4-array without the AlgebraVector wrapper.
pub fn parse_coeffs4(s: &str, what: &str) -> Result<[f64; 4], ParseError> {
    if let Some(v) = basis_symbol(s) {
        return Ok(v.coeffs());
    }
    let x = parse_numbers(s, 4, what)?;
    Ok([x[0], x[1], x[2], x[3]])
}

/// A cover point given as angle,t11,t12,t22 with `[[t11,t12],[t12,t22]]`
/// symmetric positive-definite.
pub fn parse_cover_point(s: &str, what: &str) -> Result<(f64, Mat2), ParseError> {
    let x = parse_numbers(s, 4, what)?;
    Ok((x[0], Mat2::new(x[1], x[2], x[2], x[3])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols_and_entries() {
        let v = parse_matrix_vector("e1", "u").unwrap();
        assert_eq!(v.coeffs(), [1.0, 0.0, 0.0, 0.0]);
        let v = parse_matrix_vector("0,1,-1,0", "u").unwrap();
        // [[0,1],[-1,0]] = sqrt2 e1.
        assert!((v.coeffs()[0] - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(parse_matrix_vector("1,2", "u").is_err());
        assert!(parse_matrix_vector("1,2,x,4", "u").is_err());
        let c = parse_coefficient_vector("1,1,0,0", "velocity").unwrap();
        assert_eq!(c.coeffs(), [1.0, 1.0, 0.0, 0.0]);
    }
}
