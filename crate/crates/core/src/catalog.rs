//! The formula catalog: every known series with its status and, where one
//! exists, the factorization family that proves it.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperseries::{AlgebraicConstant, DenomPattern, FormulaSpec};
use crate::rational::{int, rat, Rational};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Status {
    ProvenViaTranslation,
    EquivalentTo { id: String },
    Conjectural,
    Discovered,
    FormalDivergent,
}

impl Status {
    pub fn label(&self) -> String {
        match self {
            Self::ProvenViaTranslation => "proven-via-translation".into(),
            Self::EquivalentTo { id } => format!("equivalent-to:{id}"),
            Self::Conjectural => "conjectural".into(),
            Self::Discovered => "discovered".into(),
            Self::FormalDivergent => "formal-divergent".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub formula: FormulaSpec,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default)]
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub schema_version: u32,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for e in &self.entries {
            if !seen.insert(e.id.as_str()) {
                return Err(Error::Catalog(format!("duplicate id `{}`", e.id)));
            }
        }
        for e in &self.entries {
            e.formula
                .validate()
                .map_err(|err| Error::Catalog(format!("{}: {err}", e.id)))?;
            match &e.status {
                Status::EquivalentTo { id } if self.get(id).is_none() => {
                    return Err(Error::Catalog(format!(
                        "{}: equivalent-to `{id}` does not resolve",
                        e.id
                    )));
                }
                Status::FormalDivergent if e.formula.convergent => {
                    return Err(Error::Catalog(format!(
                        "{}: formal-divergent entry marked convergent",
                        e.id
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cat: Catalog = serde_json::from_str(text).map_err(|e| {
            Error::Catalog(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        if cat.schema_version != SCHEMA_VERSION {
            return Err(Error::Catalog(format!(
                "unsupported schema version {}",
                cat.schema_version
            )));
        }
        cat.validate()?;
        Ok(cat)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("catalog serializes");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn builtin() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            entries: builtin_entries(),
        }
    }
}

fn rats(v: &[(i64, i64)]) -> Vec<Rational> {
    v.iter().map(|&(p, q)| rat(p, q)).collect()
}

fn eighths() -> Vec<Rational> {
    rats(&[(1, 8), (3, 8), (5, 8), (7, 8)])
}

fn half_ones() -> Vec<Rational> {
    rats(&[(1, 2), (1, 1), (1, 1), (1, 1)])
}

#[allow(clippy::too_many_arguments)]
fn series(
    upper: Vec<Rational>,
    lower: Vec<Rational>,
    z: Rational,
    poly: &[i64],
    scale: Rational,
    denom: DenomPattern,
    rhs: AlgebraicConstant,
    start: u32,
) -> FormulaSpec {
    let convergent = crate::rational::abs_lt_one(&z);
    FormulaSpec {
        upper,
        lower,
        z,
        numerator_poly: poly.to_vec(),
        scale,
        denom_pattern: denom,
        rhs,
        convergent,
        start_index: start,
    }
}

fn entry(id: &str, formula: FormulaSpec, status: Status, family: Option<&str>, note: &str) -> CatalogEntry {
    CatalogEntry {
        id: id.into(),
        formula,
        status,
        family: family.map(Into::into),
        note: note.into(),
    }
}

fn equiv(id: &str) -> Status {
    Status::EquivalentTo { id: id.into() }
}

fn builtin_entries() -> Vec<CatalogEntry> {
    use DenomPattern::*;
    let pi1 = |r: Rational, d: u64| AlgebraicConstant::surd_over_pi(r, d, 1);
    let pi2 = |r: Rational, d: u64| AlgebraicConstant::surd_over_pi(r, d, 2);
    let y1 = rat(192, 2401);
    let y2 = rat(-16384, 279841);
    let y3 = rat(-16384, 2401);
    let thirds_sixths = || rats(&[(1, 3), (2, 3), (1, 6), (5, 6)]);
    let ones5 = || vec![int(1); 5];
    vec![
        entry(
            "eq-3",
            series(eighths(), half_ones(), y1.clone(), &[15, 216, 376], int(1), TwoNPlusOne, pi1(rat(98, 9), 21), 0),
            equiv("eq-4"),
            Some("fam1"),
            "s = 1/4 at y0 = 192/2401, 1/(2n+1) form",
        ),
        entry(
            "eq-4",
            series(eighths(), half_ones(), y1, &[90, 1428, -9216, 70688], int(1), One, pi1(int(294), 21), 0),
            Status::ProvenViaTranslation,
            Some("fam1"),
            "s = 1/4 at y0 = 192/2401, cubic form",
        ),
        entry(
            "for1-ex-2",
            series(eighths(), half_ones(), y2.clone(), &[280, 4037, 6970], rat(1, 529), TwoNPlusOne, pi1(rat(1, 3), 23), 0),
            equiv("for2-ex-2"),
            Some("fam2"),
            "s = 1/4 at y0 = -2^14/23^4, 1/(2n+1) form",
        ),
        entry(
            "for2-ex-2",
            series(eighths(), half_ones(), y2, &[4200, 53002, -24576, -296225], rat(1, 3174), One, pi1(int(1), 23), 0),
            Status::ProvenViaTranslation,
            Some("fam2"),
            "s = 1/4 at y0 = -2^14/23^4, cubic form",
        ),
        entry(
            "eq-1",
            series(eighths(), half_ones(), rat(1, 2401), &[55, 1072, 1920], int(1), TwoNPlusOne, pi1(rat(196, 3), 7), 0),
            Status::Conjectural,
            None,
            "s = 1/4 at y0 = 1/7^4",
        ),
        entry(
            "eq-2",
            series(thirds_sixths(), half_ones(), rat(729, 15625), &[6, 79, 133], int(1), TwoNPlusOne, pi1(rat(625, 32), 1), 0),
            Status::Conjectural,
            None,
            "s = 1/3 at y0 = (3/5)^6",
        ),
        entry(
            "eq-ten",
            series(rats(&[(1, 10), (3, 10), (7, 10), (9, 10)]), half_ones(), rat(1, 64), &[63, 1160, 2100], int(1), TwoNPlusOne, pi1(int(200), 1), 0),
            Status::Conjectural,
            None,
            "tenths parameters at y0 = 1/2^6; no factorization known",
        ),
        entry(
            "pi2-1920",
            series(
                rats(&[(1, 2), (1, 8), (3, 8), (5, 8), (7, 8)]),
                ones5(),
                rat(1, 2401),
                &[15, 304, 1920],
                int(1),
                One,
                pi2(int(56), 7),
                0,
            ),
            Status::Conjectural,
            None,
            "series for 1/pi^2 at 1/7^4",
        ),
        entry(
            "pi2-532",
            series(
                rats(&[(1, 2), (1, 3), (2, 3), (1, 6), (5, 6)]),
                ones5(),
                rat(729, 15625),
                &[9, 126, 532],
                int(1),
                One,
                pi2(rat(375, 4), 1),
                0,
            ),
            Status::Conjectural,
            None,
            "series for 1/pi^2 at (3/5)^6",
        ),
        entry(
            "addendum-div-1",
            series(eighths(), half_ones(), y3.clone(), &[-600, -7518, -24576, -18785], int(1), One, pi1(int(98), 7), 0),
            Status::FormalDivergent,
            Some("fam3"),
            "formal identity at y0 = -2^14/7^4, cubic form",
        ),
        entry(
            "addendum-div-2",
            series(eighths(), half_ones(), y3, &[120, 1273, 2210], int(1), TwoNPlusOne, pi1(int(49), 7), 0),
            equiv("addendum-div-1"),
            Some("fam3"),
            "formal identity at y0 = -2^14/7^4, 1/(2n+1) form",
        ),
        entry(
            "addendum-upside-1",
            series(
                half_ones(),
                eighths(),
                rat(-2401, 16384),
                &[-600, 7518, -24576, 18785],
                rat(1, 2401),
                NCubed,
                AlgebraicConstant::l_minus7(int(2), int(-1)),
                1,
            ),
            Status::Conjectural,
            None,
            "inverted series of the cubic formal identity",
        ),
        entry(
            "addendum-upside-2",
            series(
                half_ones(),
                eighths(),
                rat(-2401, 16384),
                &[120, -1273, 2210],
                rat(1, 2401),
                OneMinusTwoNTimesNCubed,
                AlgebraicConstant::l_minus7(int(1), int(0)),
                1,
            ),
            Status::Conjectural,
            None,
            "inverted series of the 1/(2n+1) formal identity",
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_is_valid() {
        let c = Catalog::builtin();
        c.validate().unwrap();
        assert_eq!(c.entries.len(), 13);
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let text = Catalog::builtin().to_json();
        let again = Catalog::from_json(&text).unwrap().to_json();
        assert_eq!(text, again);
    }

    #[test]
    fn parse_error_has_line() {
        let err = Catalog::from_json("{\n  \"schema_version\": 1,\n  \"entries\": [x]\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn dangling_equivalence_is_rejected() {
        let mut c = Catalog::builtin();
        c.entries.retain(|e| e.id != "eq-4");
        assert!(c.validate().is_err());
    }
}
