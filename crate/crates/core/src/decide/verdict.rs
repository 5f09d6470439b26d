use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::polyring::rational::format_rational;
use crate::polyring::Assignment;

/// A counterexample point. `exact` is false when some coordinate is a
/// decimal approximation of an algebraic number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub point: Assignment,
    pub exact: bool,
}

impl Witness {
    pub fn exact(point: Assignment) -> Self {
        Witness { point, exact: true }
    }
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .point
            .iter()
            .map(|(k, v)| format!("{k} = {}", format_rational(v)))
            .collect();
        write!(f, "{}", parts.join(", "))?;
        if !self.exact {
            write!(f, " (approximate)")?;
        }
        Ok(())
    }
}

pub(crate) struct AssignmentSer<'a>(pub &'a Assignment);

impl Serialize for AssignmentSer<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, &format_rational(v))?;
        }
        m.end()
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Witness", 2)?;
        st.serialize_field("point", &AssignmentSer(&self.point))?;
        st.serialize_field("exact", &self.exact)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Witness),
    Unknown(String),
}

impl Verdict {
    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Valid => "valid",
            Verdict::Invalid(_) => "invalid",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Valid => 0,
            Verdict::Invalid(_) => 1,
            Verdict::Unknown(_) => 2,
        }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn is_invalid(&self) -> bool {
        matches!(self, Verdict::Invalid(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Invalid(w) => Some(w),
            _ => None,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Valid => write!(f, "valid"),
            Verdict::Invalid(w) => write!(f, "invalid at {w}"),
            Verdict::Unknown(r) => write!(f, "unknown ({r})"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Verdict", 3)?;
        st.serialize_field("status", self.status())?;
        st.serialize_field("witness", &self.witness())?;
        st.serialize_field(
            "reason",
            &match self {
                Verdict::Unknown(r) => Some(r.as_str()),
                _ => None,
            },
        )?;
        st.end()
    }
}
