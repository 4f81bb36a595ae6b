//! Constructors for the example shifts and their factor codes.
//!
//! Every shift here also ships as a data file under `data/`; the tests pin
//! the constructors to those files byte for byte.

mod goodwave;
mod worm;
mod xstruct;

pub use goodwave::{good_wave, gw_symbol, gw_parts, GwSymbol};
pub use worm::{worm_alphabet, worm_precursor, worm_shift, worm_shift_code, WormTile};
pub use xstruct::{grid_torus, tile_info, wire_shapes, x_struct, x_struct_table, Corners, TileShape};

use crate::alphabet::{Alphabet, SymbolId, SymbolSet};
use crate::error::{Error, Result};
use crate::lattice::Coord;
use crate::solver::{CustomValidator, Shift};
use crate::spec::{ForbiddenPattern, ShiftSpec};
use std::sync::Arc;

/// The full shift on `k` symbols over Z^d.
pub fn full_shift(k: usize, d: usize) -> Result<ShiftSpec> {
    if k == 0 {
        return Err(Error::InvalidInput("full shift needs k >= 1".into()));
    }
    ShiftSpec::new(format!("full_{k}_{d}d"), d, vec![0; d], Alphabet::numeric(k), vec![], false)
}

fn pair(d: usize, axis: usize, a: SymbolSet, b: SymbolSet) -> ForbiddenPattern {
    ForbiddenPattern::new(vec![(Coord::zero(d), a), (Coord::unit(d, axis), b)]).expect("pair rule")
}

/// Binary words without `11`.
pub fn golden_mean() -> ShiftSpec {
    let one = SymbolSet::single(1);
    ShiftSpec::new("golden_mean", 1, vec![1], Alphabet::numeric(2), vec![pair(1, 0, one, one)], false)
        .expect("golden mean")
}

/// Z^2 binary configurations without two adjacent `1`s.
pub fn hard_squares() -> ShiftSpec {
    let one = SymbolSet::single(1);
    ShiftSpec::new(
        "hard_squares",
        2,
        vec![1, 1],
        Alphabet::numeric(2),
        vec![pair(2, 0, one, one), pair(2, 1, one, one)],
        false,
    )
    .expect("hard squares")
}

/// Golden mean along y, constant along x: rows are all-0 or all-1 and no
/// two all-1 rows are adjacent.
pub fn golden_mean_rows() -> ShiftSpec {
    let (zero, one) = (SymbolSet::single(0), SymbolSet::single(1));
    ShiftSpec::new(
        "golden_mean_rows",
        2,
        vec![1, 1],
        Alphabet::numeric(2),
        vec![pair(2, 0, zero, one), pair(2, 0, one, zero), pair(2, 1, one, one)],
        false,
    )
    .expect("golden mean rows")
}

/// At most one `1` in the whole configuration.
#[derive(Debug, Clone, Copy)]
pub struct AtMostOne;

impl CustomValidator for AtMostOne {
    fn name(&self) -> &str {
        "at_most_one"
    }

    fn accepts_cells(&self, cells: &[(Coord, SymbolId)], periodic: bool) -> bool {
        let ones = cells.iter().filter(|c| c.1 == 1).count();
        if periodic {
            ones == 0
        } else {
            ones <= 1
        }
    }
}

/// The sunny-side-up shift: binary sequences with at most one `1`.
pub fn sunny_side_up() -> (ShiftSpec, Arc<dyn CustomValidator>) {
    let spec = ShiftSpec::new("sunny_side_up", 1, vec![0], Alphabet::numeric(2), vec![], false).expect("sunny");
    (spec, Arc::new(AtMostOne))
}

/// Names accepted by [`builtin`].
pub const BUILTIN: &[&str] = &[
    "full-shift",
    "golden-mean",
    "golden-mean-rows",
    "hard-squares",
    "sunny-side-up",
    "worm-precursor",
    "x-struct",
    "good-wave",
];

/// Looks up a named shift. `full-shift` accepts `full-shift-K-D`.
pub fn builtin(name: &str) -> Result<Shift> {
    if let Some(rest) = name.strip_prefix("full-shift") {
        let (k, d) = match rest.strip_prefix('-') {
            None if rest.is_empty() => (2, 2),
            Some(r) => {
                let parts: Vec<&str> = r.split('-').collect();
                match parts.as_slice() {
                    [k, d] => (
                        k.parse().map_err(|_| Error::InvalidInput(format!("bad shift name `{name}`")))?,
                        d.parse().map_err(|_| Error::InvalidInput(format!("bad shift name `{name}`")))?,
                    ),
                    _ => return Err(Error::InvalidInput(format!("bad shift name `{name}`"))),
                }
            }
            None => return Err(Error::InvalidInput(format!("unknown shift `{name}`"))),
        };
        return Shift::new(full_shift(k, d)?);
    }
    match name {
        "golden-mean" => Shift::new(golden_mean()),
        "golden-mean-rows" => Shift::new(golden_mean_rows()),
        "hard-squares" => Shift::new(hard_squares()),
        "sunny-side-up" => {
            let (s, v) = sunny_side_up();
            Shift::with_validator(s, v)
        }
        "worm-precursor" => Shift::new(worm_precursor()),
        "x-struct" => Shift::new(x_struct()),
        "good-wave" => Shift::new(good_wave()),
        _ => Err(Error::InvalidInput(format!("unknown shift `{name}`"))),
    }
}

/// Shipped data files, keyed by file name.
pub const DATA_FILES: &[(&str, &str)] = &[
    ("golden_mean.spec", include_str!("../../data/golden_mean.spec")),
    ("hard_squares.spec", include_str!("../../data/hard_squares.spec")),
    ("worm_precursor.spec", include_str!("../../data/worm_precursor.spec")),
    ("x_struct.spec", include_str!("../../data/x_struct.spec")),
    ("good_wave.spec", include_str!("../../data/good_wave.spec")),
];

/// Canonical text of each shipped shift, as produced by the constructors.
pub fn data_file_contents() -> Vec<(&'static str, String)> {
    use crate::format::write_spec;
    vec![
        ("golden_mean.spec", write_spec(&golden_mean())),
        ("hard_squares.spec", write_spec(&hard_squares())),
        ("worm_precursor.spec", write_spec(&worm::worm_precursor_table())),
        ("x_struct.spec", write_spec(&x_struct_table())),
        ("good_wave.spec", write_spec(&good_wave())),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_spec;
    use crate::pattern::Pattern;
    use crate::spec::compile_wang;

    #[test]
    fn shipped_files_match_constructors() {
        let generated = data_file_contents();
        if std::env::var_os("SUBSHIFT_WRITE_DATA").is_some() {
            let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
            for (name, text) in &generated {
                std::fs::write(dir.join(name), text).unwrap();
            }
            return;
        }
        for ((name, shipped), (gname, text)) in DATA_FILES.iter().zip(&generated) {
            assert_eq!(name, gname);
            assert_eq!(shipped, text, "{name} differs from its constructor");
            let parsed = parse_spec(shipped).unwrap();
            assert_eq!(crate::format::write_spec(&parsed), *shipped, "{name} does not round-trip");
        }
        let xs = parse_spec(DATA_FILES[3].1).unwrap();
        assert_eq!(compile_wang(&xs).unwrap(), x_struct());
        let wp = parse_spec(DATA_FILES[2].1).unwrap();
        assert_eq!(compile_wang(&wp).unwrap(), worm_precursor());
    }

    #[test]
    fn calibration_shifts() {
        let gm = golden_mean();
        assert!(!gm.validate_pattern(&Pattern::word(0, &[1, 1])).unwrap());
        let fs = full_shift(2, 1).unwrap();
        assert_eq!(fs.alphabet().len(), 2);
        assert!(fs.forbidden().is_empty());
        let (s, v) = sunny_side_up();
        let sh = Shift::with_validator(s, v).unwrap();
        assert!(sh.validate(&Pattern::word(0, &[0, 1, 0])).unwrap());
        assert!(!sh.validate(&Pattern::word(0, &[1, 0, 1])).unwrap());
    }

    #[test]
    fn builtins_resolve() {
        for n in BUILTIN {
            assert!(builtin(n).is_ok(), "{n}");
        }
        assert_eq!(builtin("full-shift-3-1").unwrap().alphabet_len(), 3);
        assert!(builtin("nope").is_err());
        assert!(builtin("full-shift-x").is_err());
    }
}
