//! Symbolic rendering such as `+ a*b +2 b*c` or `+ dx1^dx2 -3 dx2^dx3`.
//!
//! Terms appear in lexicographic key order. A coefficient of 1 is shown
//! as a bare sign, other coefficients as sign and magnitude followed by a
//! space. Tensor factors are joined with `*`, wedge factors with `^`.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::form::KForm;
use crate::scalar::Scalar;
use crate::sparse::SparseMap;
use crate::tensor::KTensor;
use crate::text::format_coeff;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SymbolStyle {
    /// `a, b, c, ...` (26 symbols unless custom ones are supplied); form
    /// factors get a `d` prefix: `da^db`.
    Letters,
    /// `dx1, dx2, ...`; custom symbols give `d<symbol>`.
    #[default]
    DNames,
}

const LETTERS: &str = "abcdefghijklmnopqrstuvwxyz";

pub fn tensor_symbolic<T: Scalar>(t: &KTensor<T>, style: SymbolStyle, symbols: Option<&[String]>) -> Result<String> {
    let prefix = match style {
        SymbolStyle::Letters => "",
        SymbolStyle::DNames => "d",
    };
    render(t.as_map(), style, symbols, prefix, "*")
}

pub fn form_symbolic<T: Scalar>(f: &KForm<T>, style: SymbolStyle, symbols: Option<&[String]>) -> Result<String> {
    render(f.as_map(), style, symbols, "d", "^")
}

fn render<T: Scalar>(
    map: &SparseMap<T>,
    style: SymbolStyle,
    symbols: Option<&[String]>,
    prefix: &str,
    joiner: &str,
) -> Result<String> {
    if map.is_empty() {
        return Ok("0".to_string());
    }
    let names = symbol_names(style, symbols, map.dimension())?;
    let mut out = String::new();
    for (key, c) in map.iter() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push(if c < T::zero() { '-' } else { '+' });
        let mag = c.abs();
        if key.arity() == 0 {
            out.push_str(&format_coeff(mag));
            continue;
        }
        if mag != T::one() {
            out.push_str(&format_coeff(mag));
        }
        out.push(' ');
        for (pos, i) in key.iter().enumerate() {
            if pos > 0 {
                out.push_str(joiner);
            }
            write!(out, "{prefix}{}", names[i - 1]).expect("write to string");
        }
    }
    Ok(out)
}

fn symbol_names(style: SymbolStyle, symbols: Option<&[String]>, needed: usize) -> Result<Vec<String>> {
    let names: Vec<String> = match (symbols, style) {
        (Some(s), _) => s.to_vec(),
        (None, SymbolStyle::Letters) => LETTERS.chars().map(String::from).collect(),
        (None, SymbolStyle::DNames) => (1..=needed).map(|i| format!("x{i}")).collect(),
    };
    if names.len() < needed {
        return Err(Error::SymbolSupply { needed, available: names.len() });
    }
    Ok(names)
}
