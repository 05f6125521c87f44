use serde::Serialize;

/// The `(x, ħ)` window a check certifies. Checks that live in `t` only
/// (the `S_m` equation) leave `d_max` unset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_max: Option<u32>,
    pub e_min: i64,
    pub e_max: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub r: u32,
    pub window: Window,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckReport {
    pub fn pass(check: &str, r: u32, window: Window) -> Self {
        CheckReport { check: check.into(), r, window, status: "pass".into(), witness: None }
    }

    pub fn fail(check: &str, r: u32, window: Window, witness: String) -> Self {
        CheckReport { check: check.into(), r, window, status: "fail".into(), witness: Some(witness) }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}
