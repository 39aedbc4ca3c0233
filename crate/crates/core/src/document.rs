//! The JSON automaton document and the word syntax shared with the CLI.
//!
//! ```json
//! { "kind": "poly", "alphabet": ["a"], "rule": "shuffle",
//!   "variables": ["x", "y"], "output": {"x": "0", "y": "1"},
//!   "transitions": {"a": {"x": "y", "y": "x + y"}}, "initial": "x" }
//! ```
//!
//! `kind` defaults to `"term"`, `initial` to the first variable, and
//! missing outputs and transitions to zero.

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::polyalg::{Poly, Rational};
use crate::polyauto::PolyAutomaton;
use crate::rules::ProductRule;
use crate::termauto::{Term, TermAutomaton, Word};

#[derive(Debug, Clone)]
pub enum Document {
    Term { automaton: TermAutomaton, initial: Term },
    Poly { automaton: PolyAutomaton, initial: Poly },
}

const KEYS: [&str; 7] = [
    "kind",
    "alphabet",
    "rule",
    "variables",
    "output",
    "transitions",
    "initial",
];

fn doc_err(msg: impl Into<String>) -> Error {
    Error::Document(msg.into())
}

fn string_list(v: Option<&Value>, key: &str) -> Result<Vec<String>> {
    match v {
        None => Err(doc_err(format!("missing `{key}`"))),
        Some(Value::Array(items)) => items
            .iter()
            .map(|i| {
                i.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| doc_err(format!("`{key}` must list strings")))
            })
            .collect(),
        Some(_) => Err(doc_err(format!("`{key}` must be an array"))),
    }
}

fn object<'a>(v: Option<&'a Value>, key: &str) -> Result<Option<&'a Map<String, Value>>> {
    match v {
        None => Ok(None),
        Some(Value::Object(m)) => Ok(Some(m)),
        Some(_) => Err(doc_err(format!("`{key}` must be an object"))),
    }
}

fn rational(v: &Value, what: &str) -> Result<Rational> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) if n.is_i64() => Ok(Rational::from(n.as_i64().expect("i64"))),
        _ => Err(doc_err(format!("{what} must be a rational written as a string"))),
    }
}

fn expr_text<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| doc_err(format!("{what} must be an expression string")))
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let v: Value = serde_json::from_str(text).map_err(|e| doc_err(format!("invalid JSON: {e}")))?;
        Document::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Document> {
        let top = v.as_object().ok_or_else(|| doc_err("document must be a JSON object"))?;
        if let Some(k) = top.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(doc_err(format!("unknown key `{k}`")));
        }
        let kind = match top.get("kind") {
            None => "term",
            Some(Value::String(s)) if s == "term" || s == "poly" => s.as_str(),
            Some(_) => return Err(doc_err("`kind` must be \"term\" or \"poly\"")),
        };
        let alphabet = string_list(top.get("alphabet"), "alphabet")?;
        let variables = string_list(top.get("variables"), "variables")?;
        let rule = match top.get("rule") {
            Some(Value::String(s)) => ProductRule::parse(s)?,
            Some(_) => return Err(doc_err("`rule` must be a string")),
            None => return Err(doc_err("missing `rule`")),
        };
        let output = object(top.get("output"), "output")?;
        let transitions = object(top.get("transitions"), "transitions")?;
        let initial = match top.get("initial") {
            None => variables.first().cloned().unwrap_or_else(|| "0".to_string()),
            Some(v) => expr_text(v, "`initial`")?.to_string(),
        };

        let mut outputs = Vec::new();
        if let Some(m) = output {
            for (x, c) in m {
                outputs.push((x.as_str(), rational(c, &format!("output of `{x}`"))?));
            }
        }
        let mut rows = Vec::new();
        if let Some(m) = transitions {
            for (a, row) in m {
                let row = row
                    .as_object()
                    .ok_or_else(|| doc_err(format!("transitions of `{a}` must be an object")))?;
                for (x, e) in row {
                    rows.push((a.as_str(), x.as_str(), expr_text(e, &format!("transition ({a}, {x})"))?));
                }
            }
        }

        if kind == "term" {
            let mut aut = TermAutomaton::new(&alphabet, &variables, rule)?;
            for (x, c) in outputs {
                aut.set_output(x, c)?;
            }
            for (a, x, e) in rows {
                let t = Term::parse(e)?;
                aut.set_transition(a, x, t)?;
            }
            let initial = aut.parse_term(&initial)?;
            Ok(Document::Term {
                automaton: aut,
                initial,
            })
        } else {
            let mut aut = PolyAutomaton::new(&alphabet, &variables, rule)?;
            for (x, c) in outputs {
                aut.set_output(x, c)?;
            }
            for (a, x, e) in rows {
                let p = aut.parse_state(e)?;
                aut.set_transition(a, x, p)?;
            }
            let initial = aut.parse_state(&initial)?;
            Ok(Document::Poly {
                automaton: aut,
                initial,
            })
        }
    }

    /// Canonical JSON form: every output listed, zero transitions omitted.
    pub fn to_value(&self) -> Value {
        let mut top = Map::new();
        let (kind, alphabet, variables, rule) = match self {
            Document::Term { automaton: a, .. } => ("term", a.alphabet(), a.variables(), a.rule()),
            Document::Poly { automaton: a, .. } => ("poly", a.alphabet(), a.variables(), a.rule()),
        };
        top.insert("kind".into(), kind.into());
        top.insert("alphabet".into(), alphabet.to_vec().into());
        top.insert("rule".into(), rule.to_string().into());
        top.insert(
            "variables".into(),
            variables.iter().map(|v| v.to_string()).collect::<Vec<_>>().into(),
        );
        let mut output = Map::new();
        let mut transitions = Map::new();
        for a in alphabet {
            transitions.insert(a.clone(), Value::Object(Map::new()));
        }
        for v in variables {
            let (out, row): (Rational, Vec<(String, Option<String>)>) = match self {
                Document::Term { automaton, .. } => (
                    automaton.output_of(v).expect("declared").clone(),
                    alphabet
                        .iter()
                        .map(|a| {
                            let t = automaton.transition(a, v).expect("declared");
                            (a.clone(), (!t.is_zero()).then(|| t.to_string()))
                        })
                        .collect(),
                ),
                Document::Poly { automaton, .. } => (
                    automaton.output_of(v).expect("declared").clone(),
                    alphabet
                        .iter()
                        .map(|a| {
                            let p = automaton.transition(a, v).expect("declared");
                            (a.clone(), (!p.is_zero()).then(|| p.to_string()))
                        })
                        .collect(),
                ),
            };
            output.insert(v.to_string(), out.to_string().into());
            for (a, e) in row {
                if let Some(e) = e {
                    transitions[&a]
                        .as_object_mut()
                        .expect("object")
                        .insert(v.to_string(), e.into());
                }
            }
        }
        top.insert("output".into(), Value::Object(output));
        top.insert("transitions".into(), Value::Object(transitions));
        let initial = match self {
            Document::Term { initial, .. } => initial.to_string(),
            Document::Poly { initial, .. } => initial.to_string(),
        };
        top.insert("initial".into(), initial.into());
        Value::Object(top)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable")
    }

    pub fn alphabet(&self) -> &[String] {
        match self {
            Document::Term { automaton, .. } => automaton.alphabet(),
            Document::Poly { automaton, .. } => automaton.alphabet(),
        }
    }

    pub fn rule(&self) -> &ProductRule {
        match self {
            Document::Term { automaton, .. } => automaton.rule(),
            Document::Poly { automaton, .. } => automaton.rule(),
        }
    }

    /// Replaces the initial state, parsed in the document's own syntax.
    pub fn with_initial(mut self, text: &str) -> Result<Document> {
        match &mut self {
            Document::Term { automaton, initial } => *initial = automaton.parse_term(text)?,
            Document::Poly { automaton, initial } => *initial = automaton.parse_state(text)?,
        }
        Ok(self)
    }

    /// The polynomial view; term documents are quotiented, which needs a
    /// special rule.
    pub fn to_poly(&self) -> Result<(PolyAutomaton, Poly)> {
        match self {
            Document::Poly { automaton, initial } => Ok((automaton.clone(), initial.clone())),
            Document::Term { automaton, initial } => {
                Ok((PolyAutomaton::from_term_automaton(automaton)?, initial.to_poly()))
            }
        }
    }

    pub fn coefficient(&self, word: &[String], limits: &Limits) -> Result<Rational> {
        match self {
            Document::Term { automaton, initial } => automaton.coefficient(initial, word, limits),
            Document::Poly { automaton, initial } => automaton.coefficient(initial, word, limits),
        }
    }

    pub fn coefficients(&self, max_len: usize, limits: &Limits) -> Result<Vec<(Word, Rational)>> {
        match self {
            Document::Term { automaton, initial } => automaton.coefficients(initial, max_len, limits),
            Document::Poly { automaton, initial } => automaton.coefficients(initial, max_len, limits),
        }
    }
}

impl PartialEq for Document {
    fn eq(&self, other: &Self) -> bool {
        self.to_value() == other.to_value()
    }
}

fn single_chars(alphabet: &[String]) -> bool {
    alphabet.iter().all(|a| a.chars().count() == 1)
}

/// Reads a word: `""` or `"ε"` is the empty word; letters are concatenated
/// when every letter is one character, otherwise separated by whitespace.
pub fn parse_word(alphabet: &[String], text: &str) -> Result<Word> {
    let t = text.trim();
    if t.is_empty() || t == "ε" {
        return Ok(Vec::new());
    }
    let pieces: Vec<String> = if single_chars(alphabet) && !t.contains(char::is_whitespace) {
        t.chars().map(|c| c.to_string()).collect()
    } else {
        t.split_whitespace().map(str::to_string).collect()
    };
    for p in &pieces {
        if !alphabet.contains(p) {
            return Err(Error::UnknownLetter(p.clone()));
        }
    }
    Ok(pieces)
}

/// Inverse of [`parse_word`]; the empty word is `""`.
pub fn format_word(alphabet: &[String], word: &[String]) -> String {
    if single_chars(alphabet) {
        word.concat()
    } else {
        word.join(" ")
    }
}
