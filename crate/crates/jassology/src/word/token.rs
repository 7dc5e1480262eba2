//! The 16-token alphabet: six opener/closer pairs and four monomials.

use std::fmt;

/// Pair families for the six binomial token pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairKind {
    Zc,
    Mr,
    Tg,
    Tc,
    Sn,
    Ln,
}

impl PairKind {
    pub fn opener(self) -> Token {
        match self {
            PairKind::Zc => Token::ZcOpen,
            PairKind::Mr => Token::MrOpen,
            PairKind::Tg => Token::TgOpen,
            PairKind::Tc => Token::TcOpen,
            PairKind::Sn => Token::SnOpen,
            PairKind::Ln => Token::LnOpen,
        }
    }

    pub fn closer(self) -> Token {
        match self {
            PairKind::Zc => Token::ZcClose,
            PairKind::Mr => Token::MrClose,
            PairKind::Tg => Token::TgClose,
            PairKind::Tc => Token::TcClose,
            PairKind::Sn => Token::SnClose,
            PairKind::Ln => Token::LnClose,
        }
    }
}

/// Character classes shared by pairs and monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenClass {
    Zouc,
    Stoun,
    Loun,
}

/// One alphabet token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    ZcOpen,
    ZcClose,
    MrOpen,
    MrClose,
    TgOpen,
    TgClose,
    TcOpen,
    TcClose,
    SnOpen,
    SnClose,
    LnOpen,
    LnClose,
    Cu,
    Ch,
    Ba,
    Ca,
}

impl Token {
    pub const ALL: [Token; 16] = [
        Token::ZcOpen,
        Token::ZcClose,
        Token::MrOpen,
        Token::MrClose,
        Token::TgOpen,
        Token::TgClose,
        Token::TcOpen,
        Token::TcClose,
        Token::SnOpen,
        Token::SnClose,
        Token::LnOpen,
        Token::LnClose,
        Token::Cu,
        Token::Ch,
        Token::Ba,
        Token::Ca,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Token::ZcOpen => "zc+",
            Token::ZcClose => "zc-",
            Token::MrOpen => "mr+",
            Token::MrClose => "mr-",
            Token::TgOpen => "tg+",
            Token::TgClose => "tg-",
            Token::TcOpen => "tc+",
            Token::TcClose => "tc-",
            Token::SnOpen => "sn+",
            Token::SnClose => "sn-",
            Token::LnOpen => "ln+",
            Token::LnClose => "ln-",
            Token::Cu => "cu",
            Token::Ch => "ch",
            Token::Ba => "ba",
            Token::Ca => "ca",
        }
    }

    pub fn from_name(name: &str) -> Option<Token> {
        Token::ALL.iter().copied().find(|t| t.name() == name)
    }

    pub fn is_opener(self) -> bool {
        matches!(
            self,
            Token::ZcOpen
                | Token::MrOpen
                | Token::TgOpen
                | Token::TcOpen
                | Token::SnOpen
                | Token::LnOpen
        )
    }

    pub fn is_closer(self) -> bool {
        matches!(
            self,
            Token::ZcClose
                | Token::MrClose
                | Token::TgClose
                | Token::TcClose
                | Token::SnClose
                | Token::LnClose
        )
    }

    pub fn is_monomial(self) -> bool {
        matches!(self, Token::Cu | Token::Ch | Token::Ba | Token::Ca)
    }

    pub fn pair_kind(self) -> Option<PairKind> {
        match self {
            Token::ZcOpen | Token::ZcClose => Some(PairKind::Zc),
            Token::MrOpen | Token::MrClose => Some(PairKind::Mr),
            Token::TgOpen | Token::TgClose => Some(PairKind::Tg),
            Token::TcOpen | Token::TcClose => Some(PairKind::Tc),
            Token::SnOpen | Token::SnClose => Some(PairKind::Sn),
            Token::LnOpen | Token::LnClose => Some(PairKind::Ln),
            _ => None,
        }
    }

    pub fn class(self) -> TokenClass {
        match self {
            Token::ZcOpen
            | Token::ZcClose
            | Token::MrOpen
            | Token::MrClose
            | Token::TgOpen
            | Token::TgClose
            | Token::TcOpen
            | Token::TcClose
            | Token::Cu => TokenClass::Zouc,
            Token::SnOpen | Token::SnClose | Token::Ch => TokenClass::Stoun,
            Token::LnOpen | Token::LnClose | Token::Ba | Token::Ca => TokenClass::Loun,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A raw token sequence; validity against the four rules is a separate step.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct JassoWord {
    pub tokens: Vec<Token>,
}

impl JassoWord {
    pub fn new(tokens: Vec<Token>) -> Self {
        JassoWord { tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// The token at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> Token {
        self.tokens[pos - 1]
    }
}

impl fmt::Display for JassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in &self.tokens {
            if !first {
                f.write_str(" ")?;
            }
            f.write_str(t.name())?;
            first = false;
        }
        Ok(())
    }
}

/// Lexical error: an unknown token name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    /// 1-based index of the offending whitespace-separated token.
    pub position: usize,
    pub text: String,
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown token `{}` at position {}", self.text, self.position)
    }
}

impl std::error::Error for LexError {}

/// Splits whitespace-separated token names into a word. `#` starts a
/// comment running to the end of the line.
pub fn tokenize(text: &str) -> Result<JassoWord, LexError> {
    let mut tokens = Vec::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(k) => &line[..k],
            None => line,
        };
        for name in line.split_whitespace() {
            match Token::from_name(name) {
                Some(t) => tokens.push(t),
                None => {
                    return Err(LexError {
                        position: tokens.len() + 1,
                        text: name.to_string(),
                    })
                }
            }
        }
    }
    Ok(JassoWord::new(tokens))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for t in Token::ALL {
            assert_eq!(Token::from_name(t.name()), Some(t));
        }
        assert_eq!(Token::ALL.len(), 16);
    }

    #[test]
    fn tokenize_example_word() {
        let w = tokenize(
            "zc+ mr+ sn+ tg+ ba ca tg- sn- tc+ ba ln+ sn+ sn- tc+ sn+ ba sn- ch ca tc- \
             ln- sn+ ln+ cu ch ln- ca sn- ch tc- cu ch mr- zc-",
        )
        .unwrap();
        assert_eq!(w.len(), 34);
        assert_eq!(w.at(1), Token::ZcOpen);
        assert_eq!(w.at(24), Token::Cu);
    }

    #[test]
    fn tokenize_empty_and_errors() {
        assert!(tokenize("").unwrap().is_empty());
        assert!(tokenize("# just a comment\n").unwrap().is_empty());
        let err = tokenize("zc+ xx").unwrap_err();
        assert_eq!(err.position, 2);
    }

    #[test]
    fn classes() {
        assert_eq!(Token::Cu.class(), TokenClass::Zouc);
        assert_eq!(Token::Ch.class(), TokenClass::Stoun);
        assert_eq!(Token::Ba.class(), TokenClass::Loun);
        assert_eq!(Token::SnOpen.class(), TokenClass::Stoun);
    }
}
