//! Word classes from list files, and length-threshold splits.
//!
//! List files are UTF-8 with one token per line; `#` starts a comment line
//! and blank lines are ignored. Function classes are closed lists; anything
//! not listed is a content word.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ingest::{word_length, TokenPipeline};

const EN_FUNCTION: &str = include_str!("../data/en/function.txt");
const EN_PRONOUNS: &str = include_str!("../data/en/pronoun-personal.txt");
const RU_FUNCTION: &str = include_str!("../data/ru/function.txt");
const RU_PRONOUNS: &str = include_str!("../data/ru/pronoun-personal.txt");

/// Default cutoff between short and long words, in letters.
pub const DEFAULT_CUTOFF: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    Function,
    Content,
    PronounPersonal,
    Custom(String),
}

static CONTENT: ClassLabel = ClassLabel::Content;

impl ClassLabel {
    pub fn as_str(&self) -> &str {
        match self {
            ClassLabel::Function => "function",
            ClassLabel::Content => "content",
            ClassLabel::PronounPersonal => "pronoun-personal",
            ClassLabel::Custom(name) => name,
        }
    }

    /// Whether a word classified as `actual` falls under this label when
    /// used as a filter. Personal pronouns are function words.
    pub fn includes(&self, actual: &ClassLabel) -> bool {
        self == actual || (*self == ClassLabel::Function && *actual == ClassLabel::PronounPersonal)
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Custom(name) => write!(f, "custom:{name}"),
            other => f.write_str(other.as_str()),
        }
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "function" => ClassLabel::Function,
            "content" => ClassLabel::Content,
            "pronoun-personal" | "pronoun" => ClassLabel::PronounPersonal,
            other => match other.strip_prefix("custom:") {
                Some(name) if !name.is_empty() => ClassLabel::Custom(name.to_string()),
                _ => return Err(Error::InvalidArgument(format!("unknown word class {s:?}"))),
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordClassList {
    language: String,
    label: ClassLabel,
    members: BTreeSet<String>,
    source: Option<PathBuf>,
}

impl WordClassList {
    /// Reads a list file. Entries go through `pipeline` (so old spellings
    /// are folded by the active ruleset); an entry that is not a word under
    /// the active filter is an error.
    pub fn load(path: &Path, language: &str, label: ClassLabel, pipeline: &TokenPipeline) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, language, label, pipeline, Some(path.to_path_buf()))
    }

    pub fn parse(
        text: &str,
        language: &str,
        label: ClassLabel,
        pipeline: &TokenPipeline,
        source: Option<PathBuf>,
    ) -> Result<Self> {
        let mut members = BTreeSet::new();
        for (lineno, line) in text.lines().enumerate() {
            let entry = line.trim();
            if entry.is_empty() || entry.starts_with('#') {
                continue;
            }
            let word = pipeline.accept(entry).ok_or_else(|| {
                let at = source.as_deref().map(|p| p.display().to_string()).unwrap_or_else(|| "<list>".into());
                Error::InvalidArgument(format!("{at}:{}: {entry:?} is not a word", lineno + 1))
            })?;
            members.insert(word.into_owned());
        }
        if members.is_empty() {
            return Err(Error::EmptyList(source.unwrap_or_else(|| PathBuf::from("<list>"))));
        }
        Ok(Self { language: language.to_string(), label, members, source })
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn label(&self) -> &ClassLabel {
        &self.label
    }

    pub fn members(&self) -> &BTreeSet<String> {
        &self.members
    }

    pub fn source(&self) -> Option<&Path> {
        self.source.as_deref()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.members.contains(token)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Word-class lists in precedence order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lexicon {
    lists: Vec<WordClassList>,
}

impl Lexicon {
    /// Keeps the given order, except that personal-pronoun lists are moved
    /// ahead of all others.
    pub fn new(mut lists: Vec<WordClassList>) -> Self {
        lists.sort_by_key(|l| l.label != ClassLabel::PronounPersonal);
        Self { lists }
    }

    /// The lists bundled for `en` or `ru`.
    pub fn shipped(language: &str, pipeline: &TokenPipeline) -> Result<Self> {
        let (function, pronouns) = match language {
            "en" | "eng" => (EN_FUNCTION, EN_PRONOUNS),
            "ru" | "rus" => (RU_FUNCTION, RU_PRONOUNS),
            other => return Err(Error::InvalidArgument(format!("no shipped word lists for language {other:?}"))),
        };
        Ok(Self::new(vec![
            WordClassList::parse(pronouns, language, ClassLabel::PronounPersonal, pipeline, None)?,
            WordClassList::parse(function, language, ClassLabel::Function, pipeline, None)?,
        ]))
    }

    pub fn lists(&self) -> &[WordClassList] {
        &self.lists
    }

    pub fn classify(&self, token: &str) -> &ClassLabel {
        classify(token, &self.lists)
    }
}

/// Label of the first list containing `token`, or `content`.
pub fn classify<'a>(token: &str, lists: &'a [WordClassList]) -> &'a ClassLabel {
    lists.iter().find(|l| l.contains(token)).map_or(&CONTENT, |l| &l.label)
}

/// One side of a length split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthPredicate {
    cutoff: u32,
    short: bool,
}

impl LengthPredicate {
    pub fn test(&self, token: &str) -> bool {
        self.test_length(word_length(token))
    }

    pub fn test_length(&self, length: u32) -> bool {
        (length <= self.cutoff) == self.short
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }
}

/// `(short, long)`: short words have at most `cutoff` letters.
pub fn split_by_length(cutoff: u32) -> Result<(LengthPredicate, LengthPredicate)> {
    if cutoff == 0 {
        return Err(Error::InvalidArgument("length cutoff must be at least 1".into()));
    }
    Ok((LengthPredicate { cutoff, short: true }, LengthPredicate { cutoff, short: false }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{NormalizationRuleset, TokenFilterConfig};

    fn en() -> TokenPipeline {
        TokenPipeline::default()
    }

    fn ru() -> TokenPipeline {
        TokenPipeline::new(TokenFilterConfig::russian(), NormalizationRuleset::r1918())
    }

    #[test]
    fn list_format() {
        let list = WordClassList::parse("the\nof\n# article\na\n", "en", ClassLabel::Function, &en(), None).unwrap();
        assert_eq!(list.len(), 3);
        let dup = WordClassList::parse("the\n\nthe\n", "en", ClassLabel::Function, &en(), None).unwrap();
        assert_eq!(dup.members().iter().collect::<Vec<_>>(), vec!["the"]);
        assert!(matches!(
            WordClassList::parse("# nothing\n\n", "en", ClassLabel::Function, &en(), None),
            Err(Error::EmptyList(_))
        ));
        assert!(WordClassList::parse("the\n42\n", "en", ClassLabel::Function, &en(), None).is_err());
    }

    #[test]
    fn list_files_and_normalization() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ru.txt");
        std::fs::write(&path, "# old spelling\nонъ\nсѣбе\n").unwrap();
        let list = WordClassList::load(&path, "ru", ClassLabel::Custom("old".into()), &ru()).unwrap();
        assert!(list.contains("он") && list.contains("себе"));
        assert_eq!(list.source(), Some(path.as_path()));
        assert!(matches!(
            WordClassList::load(&dir.path().join("missing"), "ru", ClassLabel::Function, &ru()),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn shipped_english_classes() {
        let lex = Lexicon::shipped("en", &en()).unwrap();
        assert_eq!(lex.classify("the"), &ClassLabel::Function);
        assert_eq!(lex.classify("of"), &ClassLabel::Function);
        assert_eq!(lex.classify("he"), &ClassLabel::PronounPersonal);
        assert_eq!(lex.classify("I"), &ClassLabel::PronounPersonal);
        assert_eq!(lex.classify("his"), &ClassLabel::PronounPersonal);
        assert_eq!(lex.classify("development"), &ClassLabel::Content);
        assert_eq!(lex.classify("one"), &ClassLabel::Content);
    }

    #[test]
    fn shipped_russian_classes() {
        let lex = Lexicon::shipped("ru", &ru()).unwrap();
        assert_eq!(lex.classify("и"), &ClassLabel::Function);
        assert_eq!(lex.classify("он"), &ClassLabel::PronounPersonal);
        assert_eq!(lex.classify("развитие"), &ClassLabel::Content);
        assert!(Lexicon::shipped("de", &en()).is_err());
    }

    #[test]
    fn pronouns_take_precedence() {
        let function = WordClassList::parse("he\nthe\n", "en", ClassLabel::Function, &en(), None).unwrap();
        let pronouns = WordClassList::parse("he\n", "en", ClassLabel::PronounPersonal, &en(), None).unwrap();
        let custom = WordClassList::parse("the\n", "en", ClassLabel::Custom("x".into()), &en(), None).unwrap();
        let lex = Lexicon::new(vec![function, custom, pronouns]);
        assert_eq!(lex.classify("he"), &ClassLabel::PronounPersonal);
        assert_eq!(lex.classify("the"), &ClassLabel::Function);
        assert_eq!(lex.classify("cat"), &ClassLabel::Content);
        assert_eq!(Lexicon::default().classify("the"), &ClassLabel::Content);
    }

    #[test]
    fn class_filters() {
        assert!(ClassLabel::Function.includes(&ClassLabel::PronounPersonal));
        assert!(!ClassLabel::PronounPersonal.includes(&ClassLabel::Function));
        assert!(!ClassLabel::Content.includes(&ClassLabel::Function));
        for s in ["function", "content", "pronoun-personal", "custom:colors"] {
            let label: ClassLabel = s.parse().unwrap();
            assert_eq!(label.to_string(), s);
        }
        assert!("custom:".parse::<ClassLabel>().is_err());
        assert!("noun".parse::<ClassLabel>().is_err());
    }

    #[test]
    fn length_split() {
        let (short, long) = split_by_length(3).unwrap();
        assert!(short.test("the") && !long.test("the"));
        assert!(long.test("development") && !short.test("development"));
        let (short, long) = split_by_length(1).unwrap();
        assert!(short.test("a") && !short.test("an") && long.test("an"));
        assert!(split_by_length(0).is_err());
    }
}
