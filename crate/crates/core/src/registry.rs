//! String identifiers for codes, e.g. `bch:127:6`, `hamming3pt`, `steane`.
//!
//! A classical id may end in `:sN` to shorten by `N` positions and in `/pt`
//! (or plain `pt` for the short forms) to use `H_C = Pᵀ`.

use std::path::Path;

use crate::classical::{bch, golay23, hamming, repetition, single_parity_check, ClassicalCode};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::product::{Mode, ProductCode};
use crate::quantum::{color17, golay_css, rep3, steane, CssCode, ErrorType};

fn unknown(id: &str) -> Error {
    Error::UnknownCode(id.to_string())
}

fn number(id: &str, s: &str) -> Result<usize> {
    s.parse().map_err(|_| unknown(id))
}

fn base_classical(id: &str, base: &str) -> Result<ClassicalCode> {
    if let Some(path) = base.strip_prefix("file:") {
        let text = std::fs::read_to_string(Path::new(path))?;
        return ClassicalCode::from_parity_check(BitMatrix::from_text(&text)?);
    }
    let parts: Vec<&str> = base.split(':').collect();
    match parts.as_slice() {
        ["hamming", m] => hamming(number(id, m)?),
        ["bch", n, t] => {
            let n = number(id, n)?;
            if n < 3 || !(n + 1).is_power_of_two() {
                return Err(Error::InvalidParameter(format!("BCH length {n} is not 2^m - 1")));
            }
            bch((n + 1).trailing_zeros() as usize, number(id, t)?)
        }
        ["golay23"] | ["golay"] => Ok(golay23()),
        ["rep", n] => repetition(number(id, n)?),
        ["spc", n] => single_parity_check(number(id, n)?),
        [short] => {
            for (prefix, f) in [
                ("hamming", hamming as fn(usize) -> Result<ClassicalCode>),
                ("rep", repetition),
                ("spc", single_parity_check),
            ] {
                if let Some(rest) = short.strip_prefix(prefix) {
                    if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                        return f(number(id, rest)?);
                    }
                }
            }
            Err(unknown(id))
        }
        _ => Err(unknown(id)),
    }
}

/// Resolve a classical id to a code and the product-construction mode.
pub fn classical(id: &str) -> Result<(ClassicalCode, Mode)> {
    let (mut rest, mut mode) = (id, Mode::Plain);
    if let Some(r) = rest.strip_suffix("/pt") {
        rest = r;
        mode = Mode::Systematic;
    } else if !rest.starts_with("file:") && !rest.contains(':') {
        if let Some(r) = rest.strip_suffix("pt") {
            rest = r;
            mode = Mode::Systematic;
        }
    }
    let mut shorten = 0;
    if !rest.starts_with("file:") {
        if let Some((head, tail)) = rest.rsplit_once(":s") {
            if !tail.is_empty() && tail.bytes().all(|b| b.is_ascii_digit()) {
                shorten = number(id, tail)?;
                rest = head;
            }
        }
    }
    let mut code = base_classical(id, rest)?;
    if shorten > 0 {
        code = code.shorten(shorten)?;
    }
    Ok((code, mode))
}

pub fn quantum(id: &str) -> Result<CssCode> {
    match id {
        "rep3" => Ok(rep3()),
        "steane" => Ok(steane()),
        "color17" | "color" => Ok(color17()),
        "golay" | "golay23" => Ok(golay_css()),
        _ => Err(unknown(id)),
    }
}

/// Radii left as `None` keep the codes' own correction radii.
#[derive(Debug, Clone, Copy, Default)]
pub struct Radii {
    pub t_c: Option<usize>,
    pub t_q: Option<usize>,
    pub t_src: Option<usize>,
}

pub fn product(classical_id: &str, quantum_id: &str, error_type: ErrorType, radii: Radii) -> Result<ProductCode> {
    let (c, mode) = classical(classical_id)?;
    let mut pc = ProductCode::new(c, quantum(quantum_id)?, mode, error_type)?;
    if let Some(t) = radii.t_c {
        pc = pc.with_t_c(t)?;
    }
    if let Some(t) = radii.t_q {
        pc = pc.with_t_q(t)?;
    }
    if let Some(t) = radii.t_src {
        pc = pc.with_t_src(t)?;
    }
    Ok(pc)
}
