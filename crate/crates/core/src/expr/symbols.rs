use std::collections::HashMap;

use super::{ExprError, Func, Symbol};

/// Ordered coordinate names plus parameters with optional numeric bindings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymbolTable {
    coordinates: Vec<Symbol>,
    parameters: Vec<(Symbol, Option<f64>)>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "i"
        && Func::from_name(name).is_none()
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_coordinates(names: &[&str]) -> Result<Self, ExprError> {
        let mut t = Self::new();
        for n in names {
            t.add_coordinate(n)?;
        }
        Ok(t)
    }

    fn check_new(&self, name: &str) -> Result<Symbol, ExprError> {
        if !valid_name(name) {
            return Err(ExprError::InvalidName(name.to_string()));
        }
        if self.contains(name) {
            return Err(ExprError::DuplicateSymbol(name.to_string()));
        }
        Ok(Symbol::new(name))
    }

    pub fn add_coordinate(&mut self, name: &str) -> Result<Symbol, ExprError> {
        let s = self.check_new(name)?;
        self.coordinates.push(s.clone());
        Ok(s)
    }

    pub fn add_parameter(&mut self, name: &str, value: Option<f64>) -> Result<Symbol, ExprError> {
        let s = self.check_new(name)?;
        self.parameters.push((s.clone(), value));
        Ok(s)
    }

    pub fn with_parameter(mut self, name: &str, value: Option<f64>) -> Result<Self, ExprError> {
        self.add_parameter(name, value)?;
        Ok(self)
    }

    /// Rebinds an existing parameter.
    pub fn bind(&mut self, name: &str, value: f64) -> Result<(), ExprError> {
        let slot = self
            .parameters
            .iter_mut()
            .find(|(s, _)| s.name() == name)
            .ok_or_else(|| ExprError::UnknownSymbol(name.to_string()))?;
        slot.1 = Some(value);
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.lookup(name).is_some()
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.coordinates.iter().chain(self.parameters.iter().map(|(s, _)| s)).find(|s| s.name() == name).cloned()
    }

    pub fn coordinates(&self) -> &[Symbol] {
        &self.coordinates
    }

    pub fn parameters(&self) -> impl Iterator<Item = (&Symbol, Option<f64>)> {
        self.parameters.iter().map(|(s, v)| (s, *v))
    }

    pub fn is_coordinate(&self, s: &Symbol) -> bool {
        self.coordinates.contains(s)
    }

    pub fn parameter_value(&self, name: &str) -> Option<f64> {
        self.parameters.iter().find(|(s, _)| s.name() == name).and_then(|(_, v)| *v)
    }

    /// Numeric bindings of all bound parameters.
    pub fn bindings(&self) -> HashMap<Symbol, f64> {
        self.parameters.iter().filter_map(|(s, v)| v.map(|x| (s.clone(), x))).collect()
    }
}
