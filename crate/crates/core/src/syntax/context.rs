use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::{Name, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("variable `{0}` is bound in both the intuitionistic and the linear context")]
pub struct ContextError(pub Name);

/// A typing context `Υ; Γ`: duplicable bindings and linear bindings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualContext {
    pub intuitionistic: BTreeMap<Name, Type>,
    pub linear: BTreeMap<Name, Type>,
}

impl DualContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(
        intuitionistic: impl IntoIterator<Item = (Name, Type)>,
        linear: impl IntoIterator<Item = (Name, Type)>,
    ) -> Result<Self, ContextError> {
        let ctx = DualContext {
            intuitionistic: intuitionistic.into_iter().collect(),
            linear: linear.into_iter().collect(),
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn validate(&self) -> Result<(), ContextError> {
        match self
            .linear
            .keys()
            .find(|x| self.intuitionistic.contains_key(*x))
        {
            Some(x) => Err(ContextError(x.clone())),
            None => Ok(()),
        }
    }

    /// Bind `x` linearly, shadowing any earlier binding of the same name.
    pub fn with_linear(&self, x: &str, ty: Type) -> Self {
        let mut ctx = self.clone();
        ctx.intuitionistic.remove(x);
        ctx.linear.insert(x.to_string(), ty);
        ctx
    }

    /// Bind `x` intuitionistically, shadowing any earlier binding.
    pub fn with_intuitionistic(&self, x: &str, ty: Type) -> Self {
        let mut ctx = self.clone();
        ctx.linear.remove(x);
        ctx.intuitionistic.insert(x.to_string(), ty);
        ctx
    }

    pub fn contains(&self, x: &str) -> bool {
        self.linear.contains_key(x) || self.intuitionistic.contains_key(x)
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.intuitionistic.keys().chain(self.linear.keys())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shadowing_moves_between_zones() {
        let ctx = DualContext::from_parts([("x".to_string(), Type::One)], []).unwrap();
        let ctx = ctx.with_linear("x", Type::Top);
        assert!(ctx.intuitionistic.is_empty());
        assert_eq!(ctx.linear.get("x"), Some(&Type::Top));
        ctx.validate().unwrap();
    }

    #[test]
    fn overlapping_names_rejected() {
        let err = DualContext::from_parts(
            [("x".to_string(), Type::One)],
            [("x".to_string(), Type::One)],
        )
        .unwrap_err();
        assert_eq!(err, ContextError("x".into()));
    }
}
