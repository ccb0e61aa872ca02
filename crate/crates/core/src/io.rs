//! JSON correspondence files and compact table codes.
//!
//! A file names the alternatives (their order fixes the integer ids), the
//! number of voters, and either a built-in rule or a full table keyed by
//! human-readable profiles such as `"a>b>c|b>a>c"`.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ballot::{Alternative, Ballot};
use crate::error::{Error, Result};
use crate::outcome::OutcomeSet;
use crate::profile::{Profile, ProfileSpace};
use crate::scc::{Rule, Scc, SccKind};
use crate::MAX_ALTERNATIVES;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RuleSpec {
    Constant { alternative: String },
    Dictatorial { voter: usize },
    Omninomination,
    PluralityTies,
    BordaSet,
    ParetoSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SccFile {
    pub alternatives: Vec<String>,
    pub voters: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<RuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<BTreeMap<String, Vec<String>>>,
}

/// A correspondence together with display names for its alternatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedScc {
    pub names: Vec<String>,
    pub scc: Scc,
}

/// `a`, `b`, `c`, ...
pub fn default_names(m: usize) -> Vec<String> {
    (0..m).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

impl NamedScc {
    pub fn with_default_names(scc: Scc) -> Self {
        NamedScc {
            names: default_names(scc.m()),
            scc,
        }
    }

    pub fn from_file(file: &SccFile) -> Result<Self> {
        let names = &file.alternatives;
        let m = names.len();
        if m == 0 || m > MAX_ALTERNATIVES {
            return Err(Error::Format(format!(
                "need 1..={MAX_ALTERNATIVES} alternatives, got {m}"
            )));
        }
        let lookup = name_lookup(names)?;
        let n = file.voters;
        if n == 0 {
            return Err(Error::Format("voters must be positive".into()));
        }
        let scc = match (&file.rule, &file.table) {
            (Some(rule), None) => {
                let rule = match rule {
                    RuleSpec::Constant { alternative } => Rule::Constant(resolve(&lookup, alternative)?),
                    RuleSpec::Dictatorial { voter } => Rule::Dictatorial(*voter),
                    RuleSpec::Omninomination => Rule::Omninomination,
                    RuleSpec::PluralityTies => Rule::PluralityTies,
                    RuleSpec::BordaSet => Rule::BordaSet,
                    RuleSpec::ParetoSet => Rule::ParetoSet,
                };
                Scc::from_rule(n, m, rule)?
            }
            (None, Some(table)) => table_from_keys(n, names, &lookup, table)?,
            _ => {
                return Err(Error::Format(
                    "exactly one of \"rule\" and \"table\" must be present".into(),
                ))
            }
        };
        Ok(NamedScc {
            names: names.clone(),
            scc,
        })
    }

    pub fn to_file(&self) -> SccFile {
        let names = &self.names;
        let (rule, table) = match self.scc.kind() {
            SccKind::Rule(r) => (
                Some(match *r {
                    Rule::Constant(a) => RuleSpec::Constant {
                        alternative: names[a.index()].clone(),
                    },
                    Rule::Dictatorial(voter) => RuleSpec::Dictatorial { voter },
                    Rule::Omninomination => RuleSpec::Omninomination,
                    Rule::PluralityTies => RuleSpec::PluralityTies,
                    Rule::BordaSet => RuleSpec::BordaSet,
                    Rule::ParetoSet => RuleSpec::ParetoSet,
                }),
                None,
            ),
            SccKind::ExplicitTable(t) => {
                let space = self.scc.space();
                let table = t
                    .iter()
                    .enumerate()
                    .map(|(idx, w)| {
                        let p = space.decode(idx as u64).expect("table index in range");
                        (profile_key(names, &p), w.iter().map(|a| names[a.index()].clone()).collect())
                    })
                    .collect();
                (None, Some(table))
            }
        };
        SccFile {
            alternatives: names.clone(),
            voters: self.scc.n(),
            rule,
            table,
        }
    }

    pub fn set_names(&self, w: OutcomeSet) -> Vec<String> {
        w.iter().map(|a| self.names[a.index()].clone()).collect()
    }

    pub fn ballot_key(&self, b: &Ballot) -> String {
        ballot_key(&self.names, b)
    }

    pub fn profile_key(&self, p: &Profile) -> String {
        profile_key(&self.names, p)
    }
}

fn name_lookup(names: &[String]) -> Result<HashMap<&str, Alternative>> {
    let mut lookup = HashMap::new();
    for (i, name) in names.iter().enumerate() {
        if name.is_empty() || name.contains(['>', '|']) {
            return Err(Error::Format(format!("invalid alternative name {name:?}")));
        }
        if lookup.insert(name.as_str(), Alternative(i as u8)).is_some() {
            return Err(Error::Format(format!("duplicate alternative name {name:?}")));
        }
    }
    Ok(lookup)
}

fn resolve(lookup: &HashMap<&str, Alternative>, name: &str) -> Result<Alternative> {
    lookup
        .get(name.trim())
        .copied()
        .ok_or_else(|| Error::Format(format!("unknown alternative {name:?}")))
}

pub fn ballot_key(names: &[String], b: &Ballot) -> String {
    b.ranking()
        .map(|a| names[a.index()].as_str())
        .collect::<Vec<_>>()
        .join(">")
}

/// Ballots joined by `|`, each naming all alternatives joined by `>`.
pub fn profile_key(names: &[String], p: &Profile) -> String {
    p.ballots()
        .iter()
        .map(|b| ballot_key(names, b))
        .collect::<Vec<_>>()
        .join("|")
}

pub fn parse_ballot_key(names: &[String], key: &str) -> Result<Ballot> {
    let lookup = name_lookup(names)?;
    parse_ballot(&lookup, names.len(), key)
}

fn parse_ballot(lookup: &HashMap<&str, Alternative>, m: usize, key: &str) -> Result<Ballot> {
    let order = key
        .split('>')
        .map(|name| resolve(lookup, name).map(|a| a.0))
        .collect::<Result<Vec<u8>>>()?;
    if order.len() != m {
        return Err(Error::Format(format!("ballot {key:?} must rank all {m} alternatives")));
    }
    Ballot::new(order).map_err(|_| Error::Format(format!("ballot {key:?} repeats an alternative")))
}

pub fn parse_profile_key(names: &[String], key: &str) -> Result<Profile> {
    let lookup = name_lookup(names)?;
    parse_profile(&lookup, names.len(), key)
}

fn parse_profile(lookup: &HashMap<&str, Alternative>, m: usize, key: &str) -> Result<Profile> {
    let ballots = key
        .split('|')
        .map(|b| parse_ballot(lookup, m, b))
        .collect::<Result<Vec<_>>>()?;
    Profile::new(ballots)
}

fn table_from_keys(
    n: usize,
    names: &[String],
    lookup: &HashMap<&str, Alternative>,
    entries: &BTreeMap<String, Vec<String>>,
) -> Result<Scc> {
    let m = names.len();
    let space = ProfileSpace::new(n, m)?;
    let mut table: Vec<Option<OutcomeSet>> = vec![None; space.size() as usize];
    for (key, members) in entries {
        let p = parse_profile(lookup, m, key)?;
        if p.n() != n {
            return Err(Error::Format(format!("profile {key:?} has {} ballots, expected {n}", p.n())));
        }
        if members.is_empty() {
            return Err(Error::Format(format!("empty outcome for profile {key:?}")));
        }
        let set = OutcomeSet::from_alternatives(
            members.iter().map(|name| resolve(lookup, name)).collect::<Result<Vec<_>>>()?,
        )?;
        let slot = &mut table[space.index(&p)? as usize];
        if slot.replace(set).is_some() {
            return Err(Error::Format(format!("profile {key:?} listed twice")));
        }
    }
    let missing: Vec<String> = table
        .iter()
        .enumerate()
        .filter(|(_, w)| w.is_none())
        .map(|(idx, _)| profile_key(names, &space.decode(idx as u64).expect("in range")))
        .collect();
    if !missing.is_empty() {
        let shown = missing.iter().take(10).cloned().collect::<Vec<_>>().join(", ");
        return Err(Error::Format(format!(
            "table is missing {} profile keys: {shown}{}",
            missing.len(),
            if missing.len() > 10 { ", ..." } else { "" }
        )));
    }
    Scc::from_table(n, m, table.into_iter().map(|w| w.expect("checked")).collect())
}

pub fn load_scc(path: impl AsRef<Path>) -> Result<NamedScc> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
    let file: SccFile = serde_json::from_str(&text)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    NamedScc::from_file(&file)
}

pub fn save_scc(f: &NamedScc, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(&f.to_file()).expect("file serializes");
    fs::write(path, text + "\n").map_err(|e| Error::Format(format!("cannot write {}: {e}", path.display())))
}

/// `"{n}x{m}:"` followed by one base-(2^m - 1) digit (`mask - 1`) per
/// profile slot in canonical order, separated by `.`.
pub fn table_code(f: &Scc) -> String {
    let digits = f
        .table()
        .iter()
        .map(|w| (w.mask() - 1).to_string())
        .collect::<Vec<_>>()
        .join(".");
    format!("{}x{}:{digits}", f.n(), f.m())
}

pub fn parse_table_code(code: &str) -> Result<Scc> {
    let bad = |why: &str| Error::Format(format!("bad table code: {why}"));
    let (dims, digits) = code.trim().split_once(':').ok_or_else(|| bad("missing ':'"))?;
    let (n, m) = dims.split_once('x').ok_or_else(|| bad("dimensions must be NxM"))?;
    let n: usize = n.parse().map_err(|_| bad("voter count"))?;
    let m: usize = m.parse().map_err(|_| bad("alternative count"))?;
    if m == 0 || m > MAX_ALTERNATIVES {
        return Err(bad("alternative count out of range"));
    }
    let base = (1u16 << m) - 1;
    let table = digits
        .split('.')
        .map(|d| {
            let d: u16 = d.parse().map_err(|_| bad("slot digit"))?;
            if d >= base {
                return Err(bad("slot digit exceeds base"));
            }
            Ok(OutcomeSet::from_mask_unchecked((d + 1) as u8))
        })
        .collect::<Result<Vec<_>>>()?;
    Scc::from_table(n, m, table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        default_names(3)
    }

    fn identity_file() -> SccFile {
        let f = NamedScc::with_default_names(Scc::from_rule(1, 3, Rule::Dictatorial(0)).unwrap().materialize());
        f.to_file()
    }

    #[test]
    fn keys_round_trip() {
        let p = parse_profile_key(&names(), "a>b>c|b>a>c").unwrap();
        assert_eq!(p.ballot(1).as_slice(), &[1, 0, 2]);
        assert_eq!(profile_key(&names(), &p), "a>b>c|b>a>c");
        assert!(parse_profile_key(&names(), "a>b|b>a>c").is_err());
        assert!(parse_profile_key(&names(), "a>a>c").is_err());
        assert!(parse_profile_key(&names(), "a>b>d").is_err());
    }

    #[test]
    fn six_key_table_loads() {
        let file = identity_file();
        assert_eq!(file.table.as_ref().unwrap().len(), 6);
        let f = NamedScc::from_file(&file).unwrap();
        assert_eq!(f.scc.n(), 1);
    }

    #[test]
    fn missing_key_is_named() {
        let mut file = identity_file();
        file.table.as_mut().unwrap().remove("c>b>a");
        let err = NamedScc::from_file(&file).unwrap_err().to_string();
        assert!(err.contains("c>b>a"), "{err}");
    }

    #[test]
    fn empty_outcome_is_named() {
        let mut file = identity_file();
        file.table.as_mut().unwrap().insert("b>c>a".into(), vec![]);
        let err = NamedScc::from_file(&file).unwrap_err().to_string();
        assert!(err.contains("b>c>a") && err.contains("empty"), "{err}");
    }

    #[test]
    fn unknown_alternative_rejected() {
        let mut file = identity_file();
        file.table.as_mut().unwrap().insert("b>c>a".into(), vec!["z".into()]);
        assert!(NamedScc::from_file(&file).unwrap_err().to_string().contains("\"z\""));
        let rule = SccFile {
            alternatives: names(),
            voters: 2,
            rule: Some(RuleSpec::Constant { alternative: "q".into() }),
            table: None,
        };
        assert!(NamedScc::from_file(&rule).is_err());
    }

    #[test]
    fn rule_xor_table() {
        let mut file = identity_file();
        file.rule = Some(RuleSpec::BordaSet);
        assert!(NamedScc::from_file(&file).is_err());
        file.table = None;
        file.rule = None;
        assert!(NamedScc::from_file(&file).is_err());
    }

    #[test]
    fn rule_json_shape() {
        let text = r#"{"alternatives":["x","y","z"],"voters":2,"rule":{"name":"dictatorial","voter":1}}"#;
        let file: SccFile = serde_json::from_str(text).unwrap();
        let f = NamedScc::from_file(&file).unwrap();
        assert_eq!(f.scc.kind(), &SccKind::Rule(Rule::Dictatorial(1)));
        assert_eq!(serde_json::to_string(&f.to_file()).unwrap(), text);
    }

    #[test]
    fn table_code_round_trip() {
        let f = Scc::from_rule(2, 3, Rule::BordaSet).unwrap().materialize();
        let code = table_code(&f);
        assert!(code.starts_with("2x3:"));
        assert_eq!(parse_table_code(&code).unwrap(), f);
        assert!(parse_table_code("1x3:0.1.2").is_err());
        assert!(parse_table_code("1x3:0.1.2.3.4.7").is_err());
        assert!(parse_table_code("1x2:0.2").is_ok());
    }
}
