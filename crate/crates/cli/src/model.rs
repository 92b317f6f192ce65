use sofree::cumulants::{CumulantModel, LetterId, Word};
use sofree::dist::{add_builtin, resolve_model, BuiltinKind};

use crate::error::{usage, Result};

pub fn load(reference: &str) -> Result<CumulantModel> {
    Ok(resolve_model(reference)?)
}

/// `word` parsed as letters joined by `.`, or the model's first letter when absent.
pub fn element(model: &CumulantModel, word: Option<&str>) -> Result<Word> {
    match word {
        Some(s) => {
            let w = model.alphabet().parse_word(s)?;
            if w.is_empty() {
                return Err(usage("--element must name at least one letter"));
            }
            Ok(w)
        }
        None if model.alphabet().is_empty() => Err(usage("the model has no letters")),
        None => Ok(vec![LetterId(0)]),
    }
}

/// Letters named in `names`, or every letter of the model.
pub fn letters(model: &CumulantModel, names: &[String]) -> Result<Vec<LetterId>> {
    if names.is_empty() {
        return Ok(model.alphabet().ids().collect());
    }
    names.iter().map(|n| Ok(model.letter(n)?)).collect()
}

/// A model holding one fresh copy of each builtin in `factors` (names
/// separated by `,`), letters numbered in order (`c1`, `c2`, `p3`, ...).
/// Returns the model and, per factor list, the product word.
pub fn builtin_products(factors: &[&str]) -> Result<(CumulantModel, Vec<Word>)> {
    let mut model = CumulantModel::new(sofree::cumulants::DEFAULT_TRUNCATION);
    let mut words = Vec::new();
    let mut count = 0;
    for list in factors {
        let mut word = Vec::new();
        for name in list.split(',') {
            let kind: BuiltinKind = name.trim().parse()?;
            count += 1;
            word.push(add_builtin(&mut model, &kind, Some(&count.to_string()))?[0]);
        }
        words.push(word);
    }
    Ok((model, words))
}
