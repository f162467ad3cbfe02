//! The bundled sample feature table: 42 features that a survey of viewers
//! extracted from one simple magic-square image, with how many independent
//! viewers named each feature and whether three later responders judged it
//! present. Purely demo data — it maps opaque feature ids to readable names.

use crate::error::{Error, Result};

/// The bundled CSV, columns
/// `feature_id,name,frequency,responder1,responder2,responder3`.
pub const MAGIC_SQUARE_CSV: &str = include_str!("../data/magic_square_features.csv");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedFeature {
    pub id: u32,
    pub name: String,
    /// How many survey participants wrote this feature down.
    pub frequency: u32,
    /// Whether each of the three responders judged the feature present.
    pub responses: [bool; 3],
}

/// Split one CSV line, honoring double quotes around a field.
fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut current = String::new();
    let mut quoted = false;
    for c in line.chars() {
        match c {
            '"' => quoted = !quoted,
            ',' if !quoted => fields.push(std::mem::take(&mut current)),
            _ => current.push(c),
        }
    }
    fields.push(current);
    fields
}

/// Parse a feature table in the bundled CSV format.
pub fn parse_feature_table(csv: &str) -> Result<Vec<NamedFeature>> {
    let mut rows = Vec::new();
    for (lineno, line) in csv.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let fields = split_csv_line(line);
        if fields.len() != 6 {
            return Err(Error::InvalidParam(format!(
                "feature table line {}: expected 6 fields, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let parse_yn = |s: &str| match s {
            "Y" => Ok(true),
            "N" => Ok(false),
            other => {
                Err(Error::InvalidParam(format!("feature table line {}: bad flag {other:?}", lineno + 1)))
            }
        };
        rows.push(NamedFeature {
            id: fields[0]
                .parse()
                .map_err(|_| Error::InvalidParam(format!("bad id {:?}", fields[0])))?,
            name: fields[1].clone(),
            frequency: fields[2]
                .parse()
                .map_err(|_| Error::InvalidParam(format!("bad frequency {:?}", fields[2])))?,
            responses: [parse_yn(&fields[3])?, parse_yn(&fields[4])?, parse_yn(&fields[5])?],
        });
    }
    Ok(rows)
}

/// The bundled table, parsed.
pub fn sample_features() -> Vec<NamedFeature> {
    parse_feature_table(MAGIC_SQUARE_CSV).expect("bundled table is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table_shape() {
        let rows = sample_features();
        assert_eq!(rows.len(), 42);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.id, i as u32 + 1);
            assert!((1..=10).contains(&row.frequency));
        }
        // spot checks against the survey
        assert_eq!(rows[0].name, "Numbers (Digits 1-9)");
        assert_eq!(rows[0].frequency, 5);
        assert_eq!(rows[0].responses, [true, true, true]);
        let balance = rows.iter().find(|r| r.name == "Balance").unwrap();
        assert_eq!(balance.responses, [false, false, false]);
        let quoted = rows.iter().find(|r| r.id == 26).unwrap();
        assert_eq!(quoted.name, "Alphabets C,S,L and O");
    }

    #[test]
    fn frequencies_total_the_survey_mentions() {
        // one 5, one 4, five 3s, four 2s, thirty-one 1s
        let total: u32 = sample_features().iter().map(|r| r.frequency).sum();
        assert_eq!(total, 63);
    }

    #[test]
    fn malformed_rows_are_rejected() {
        assert!(parse_feature_table("h\n1,x,2,Y\n").is_err());
        assert!(parse_feature_table("h\n1,x,2,Y,Y,Q\n").is_err());
        assert!(parse_feature_table("h\na,x,2,Y,Y,Y\n").is_err());
    }
}
