use super::{Literal, Modality, Program, Rule, SubjectiveLiteral};

fn eliminate_m_literal(l: &Literal) -> Literal {
    match l {
        Literal::Subjective(s) if s.modality == Modality::M => {
            Literal::Subjective(SubjectiveLiteral {
                negated: !s.negated,
                modality: Modality::K,
                inner: s.inner.negated(),
            })
        }
        other => other.clone(),
    }
}

/// `M l` becomes `not K not l`, `not M l` becomes `K not l`.
pub fn eliminate_m_rule(rule: &Rule) -> Rule {
    Rule {
        head: rule.head.clone(),
        body: rule.body.iter().map(eliminate_m_literal).collect(),
        pos: rule.pos,
    }
}

pub fn eliminate_m(program: &Program) -> Program {
    let mut out = Program {
        rules: Vec::new(),
        extra_atoms: program.extra_atoms.clone(),
    };
    out.extend(program.rules().iter().map(eliminate_m_rule));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn rewrite(text: &str) -> String {
        eliminate_m(&parse_program(text).unwrap()).to_string()
    }

    #[test]
    fn rewrites() {
        assert_eq!(rewrite(":- M a."), ":- not K not a.\n");
        assert_eq!(rewrite(":- not M a."), ":- K not a.\n");
        assert_eq!(rewrite(":- M not not a."), ":- not K not a.\n");
        assert_eq!(rewrite(":- not M not a."), ":- K not not a.\n");
    }

    #[test]
    fn m_free_program_unchanged() {
        let p = parse_program("a :- K b, not K not c. b.").unwrap();
        assert_eq!(eliminate_m(&p), p);
    }
}
