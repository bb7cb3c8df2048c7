use std::fmt;

/// Propositions of intuitionistic linear logic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    One,
    Top,
    Zero,
    Lolli(Box<Type>, Box<Type>),
    Tensor(Box<Type>, Box<Type>),
    With(Box<Type>, Box<Type>),
    Plus(Box<Type>, Box<Type>),
    Bang(Box<Type>),
}

impl Type {
    pub fn lolli(a: Type, b: Type) -> Type {
        Type::Lolli(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: Type, b: Type) -> Type {
        Type::Tensor(Box::new(a), Box::new(b))
    }

    pub fn with(a: Type, b: Type) -> Type {
        Type::With(Box::new(a), Box::new(b))
    }

    pub fn plus(a: Type, b: Type) -> Type {
        Type::Plus(Box::new(a), Box::new(b))
    }

    pub fn bang(a: Type) -> Type {
        Type::Bang(Box::new(a))
    }

    /// `|A|`: binary connectives add, `!` adds one, constants count one.
    pub fn size(&self) -> usize {
        match self {
            Type::One | Type::Top | Type::Zero => 1,
            Type::Lolli(a, b) | Type::Tensor(a, b) | Type::With(a, b) | Type::Plus(a, b) => {
                a.size() + b.size()
            }
            Type::Bang(a) => a.size() + 1,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Type::One | Type::Top | Type::Zero => 0,
            Type::Lolli(a, b) | Type::Tensor(a, b) | Type::With(a, b) | Type::Plus(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Type::Bang(a) => 1 + a.depth(),
        }
    }

    pub fn contains_bang(&self) -> bool {
        match self {
            Type::One | Type::Top | Type::Zero => false,
            Type::Lolli(a, b) | Type::Tensor(a, b) | Type::With(a, b) | Type::Plus(a, b) => {
                a.contains_bang() || b.contains_bang()
            }
            Type::Bang(_) => true,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Type::Lolli(..) => 1,
            Type::Plus(..) => 2,
            Type::With(..) => 3,
            Type::Tensor(..) => 4,
            Type::Bang(_) => 5,
            Type::One | Type::Top | Type::Zero => 6,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, ty: &Type, min_prec: u8) -> fmt::Result {
    if ty.precedence() < min_prec {
        write!(f, "({ty})")
    } else {
        write!(f, "{ty}")
    }
}

/// Concrete ASCII syntax. `-o` associates to the right; `*`, `&` and `(+)`
/// associate to the left.
impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        match self {
            Type::One => f.write_str("I"),
            Type::Top => f.write_str("Top"),
            Type::Zero => f.write_str("Zero"),
            Type::Lolli(a, b) => {
                write_operand(f, a, p + 1)?;
                f.write_str(" -o ")?;
                write_operand(f, b, p)
            }
            Type::Tensor(a, b) | Type::With(a, b) | Type::Plus(a, b) => {
                let op = match self {
                    Type::Tensor(..) => " * ",
                    Type::With(..) => " & ",
                    _ => " (+) ",
                };
                write_operand(f, a, p)?;
                f.write_str(op)?;
                write_operand(f, b, p + 1)
            }
            Type::Bang(a) => {
                f.write_str("!")?;
                write_operand(f, a, p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_follows_connectives() {
        assert_eq!(Type::One.size(), 1);
        assert_eq!(Type::bang(Type::One).size(), 2);
        let a = Type::lolli(Type::with(Type::One, Type::One), Type::Top);
        assert_eq!(a.size(), 3);
    }

    #[test]
    fn display_minimal_parens() {
        let v = Type::with(Type::with(Type::One, Type::One), Type::One);
        assert_eq!(v.to_string(), "I & I & I");
        let w = Type::with(Type::One, Type::with(Type::One, Type::One));
        assert_eq!(w.to_string(), "I & (I & I)");
        let l = Type::lolli(Type::lolli(Type::One, Type::One), Type::One);
        assert_eq!(l.to_string(), "(I -o I) -o I");
        let b = Type::bang(Type::with(Type::One, Type::One));
        assert_eq!(b.to_string(), "!(I & I)");
    }
}
