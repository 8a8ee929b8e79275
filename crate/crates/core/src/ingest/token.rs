//! Wordhood decisions and word length.

use unicode_script::{Script, UnicodeScript};

use crate::error::{Error, Result};

pub const APOSTROPHE: char = '\'';
pub const TYPOGRAPHIC_APOSTROPHE: char = '\u{2019}';

/// Which 1-grams count as words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenFilterConfig {
    allowed_scripts: Vec<Script>,
    allow_apostrophe: bool,
    case_fold: bool,
    reject_substrings: Vec<String>,
}

impl TokenFilterConfig {
    pub fn new(
        scripts: impl IntoIterator<Item = Script>,
        allow_apostrophe: bool,
        case_fold: bool,
        reject_substrings: Vec<String>,
    ) -> Result<Self> {
        let mut allowed_scripts: Vec<Script> = scripts.into_iter().collect();
        allowed_scripts.sort_by_key(|s| s.full_name());
        allowed_scripts.dedup();
        if allowed_scripts.is_empty() {
            return Err(Error::InvalidFilter("at least one script must be enabled".into()));
        }
        if reject_substrings.iter().any(|s| s.is_empty()) {
            return Err(Error::InvalidFilter("reject substrings must be non-empty".into()));
        }
        if let Some(s) = reject_substrings.iter().find(|s| s.contains(['|', ';', '\n'])) {
            return Err(Error::InvalidFilter(format!("reject substring {s:?} contains a reserved character")));
        }
        Ok(Self { allowed_scripts, allow_apostrophe, case_fold, reject_substrings })
    }

    /// Latin letters, apostrophes allowed, case preserved, `_` rejected.
    pub fn english() -> Self {
        Self::for_scripts(&[Script::Latin])
    }

    /// Cyrillic letters, otherwise as [`TokenFilterConfig::english`].
    pub fn russian() -> Self {
        Self::for_scripts(&[Script::Cyrillic])
    }

    /// Default settings for a language tag (`en`, `ru`); unknown tags get
    /// Latin and Cyrillic together.
    pub fn for_language(lang: &str) -> Self {
        match lang {
            "en" | "eng" => Self::english(),
            "ru" | "rus" => Self::russian(),
            _ => Self::for_scripts(&[Script::Latin, Script::Cyrillic]),
        }
    }

    fn for_scripts(scripts: &[Script]) -> Self {
        Self::new(scripts.iter().copied(), true, false, vec!["_".to_string()]).expect("non-empty script list")
    }

    pub fn with_case_fold(mut self, case_fold: bool) -> Self {
        self.case_fold = case_fold;
        self
    }

    pub fn allowed_scripts(&self) -> &[Script] {
        &self.allowed_scripts
    }

    pub fn allow_apostrophe(&self) -> bool {
        self.allow_apostrophe
    }

    pub fn case_fold(&self) -> bool {
        self.case_fold
    }

    pub fn reject_substrings(&self) -> &[String] {
        &self.reject_substrings
    }

    /// Stable textual id recorded as store provenance.
    pub fn id(&self) -> String {
        let scripts: Vec<&str> = self.allowed_scripts.iter().map(|s| s.full_name()).collect();
        format!(
            "scripts={};apostrophe={};case_fold={};reject={}",
            scripts.join("+"),
            u8::from(self.allow_apostrophe),
            u8::from(self.case_fold),
            self.reject_substrings.join("|"),
        )
    }

    /// Inverse of [`TokenFilterConfig::id`].
    pub fn from_id(id: &str) -> Result<Self> {
        let bad = || Error::InvalidFilter(format!("malformed filter id {id:?}"));
        let mut fields = [None; 4];
        for part in id.split(';') {
            let (key, value) = part.split_once('=').ok_or_else(bad)?;
            let slot =
                ["scripts", "apostrophe", "case_fold", "reject"].iter().position(|k| *k == key).ok_or_else(bad)?;
            fields[slot] = Some(value);
        }
        let [Some(scripts), Some(apostrophe), Some(case_fold), Some(reject)] = fields else {
            return Err(bad());
        };
        let scripts =
            scripts.split('+').map(|name| Script::from_full_name(name).ok_or_else(bad)).collect::<Result<Vec<_>>>()?;
        let flag = |v: &str| match v {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(bad()),
        };
        let reject = if reject.is_empty() { Vec::new() } else { reject.split('|').map(String::from).collect() };
        Self::new(scripts, flag(apostrophe)?, flag(case_fold)?, reject)
    }

    fn script_allowed(&self, c: char) -> bool {
        if c.is_ascii_alphabetic() {
            return self.allowed_scripts.contains(&Script::Latin);
        }
        let script = c.script();
        self.allowed_scripts.contains(&script)
    }
}

impl Default for TokenFilterConfig {
    fn default() -> Self {
        Self::english()
    }
}

fn is_apostrophe(c: char) -> bool {
    c == APOSTROPHE || c == TYPOGRAPHIC_APOSTROPHE
}

/// True when `token` is made only of letters from the allowed scripts (and
/// apostrophes, if enabled), holds at least one letter, and contains none of
/// the rejected substrings.
pub fn is_word(token: &str, config: &TokenFilterConfig) -> bool {
    if token.is_empty() {
        return false;
    }
    if config.reject_substrings.iter().any(|s| token.contains(s.as_str())) {
        return false;
    }
    let mut letters = 0usize;
    for c in token.chars() {
        if is_apostrophe(c) {
            if !config.allow_apostrophe {
                return false;
            }
        } else if c.is_alphabetic() && config.script_allowed(c) {
            letters += 1;
        } else {
            return false;
        }
    }
    letters > 0
}

/// Length in Unicode scalar values; apostrophes count.
pub fn word_length(token: &str) -> u32 {
    if token.is_ascii() {
        token.len() as u32
    } else {
        token.chars().count() as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_round_trips() {
        for config in [
            TokenFilterConfig::english(),
            TokenFilterConfig::for_language("xx").with_case_fold(true),
            TokenFilterConfig::new([Script::Greek], false, false, vec![]).unwrap(),
        ] {
            assert_eq!(TokenFilterConfig::from_id(&config.id()).unwrap(), config);
        }
        assert!(TokenFilterConfig::from_id("scripts=Latin").is_err());
        assert!(TokenFilterConfig::from_id("scripts=Klingon;apostrophe=1;case_fold=0;reject=_").is_err());
        assert!(TokenFilterConfig::new([Script::Latin], true, false, vec!["a|b".into()]).is_err());
    }

    #[test]
    fn paper_word_examples() {
        let en = TokenFilterConfig::english();
        assert!(is_word("don't", &en));
        assert!(is_word("don\u{2019}t", &en));
        assert!(!is_word("3.14", &en));
        assert!(!is_word("burnt_NOUN", &en));
        assert!(!is_word("'''", &en));
        assert!(!is_word("", &en));
    }

    #[test]
    fn scripts_are_enforced() {
        let en = TokenFilterConfig::english();
        let ru = TokenFilterConfig::russian();
        assert!(is_word("Mr", &en));
        assert!(!is_word("мир", &en));
        assert!(is_word("мир", &ru));
        assert!(is_word("хлѣбъ", &ru));
        assert!(!is_word("mir", &ru));
        // mixed-script tokens are rejected unless both scripts are enabled
        let both = TokenFilterConfig::for_language("xx");
        assert!(is_word("abcмир", &both));
        assert!(!is_word("abcмир", &en));
        assert!(is_word("café", &en));
    }

    #[test]
    fn apostrophe_can_be_disabled() {
        let cfg = TokenFilterConfig::new([Script::Latin], false, false, vec![]).unwrap();
        assert!(!is_word("don't", &cfg));
        assert!(is_word("dont", &cfg));
    }

    #[test]
    fn empty_script_set_is_rejected() {
        assert!(matches!(TokenFilterConfig::new([], true, false, vec![]), Err(Error::InvalidFilter(_))));
    }

    #[test]
    fn lengths_count_scalars() {
        assert_eq!(word_length("the"), 3);
        assert_eq!(word_length("don't"), 5);
        assert_eq!(word_length("мир"), 3);
        assert_eq!(word_length("хлѣбъ"), 5);
    }

    #[test]
    fn filter_id_is_stable() {
        assert_eq!(TokenFilterConfig::english().id(), "scripts=Latin;apostrophe=1;case_fold=0;reject=_");
        let both =
            TokenFilterConfig::new([Script::Latin, Script::Cyrillic, Script::Latin], true, true, vec![]).unwrap();
        assert_eq!(both.id(), "scripts=Cyrillic+Latin;apostrophe=1;case_fold=1;reject=");
    }
}
