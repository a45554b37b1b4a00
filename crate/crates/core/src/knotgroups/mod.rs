//! Knot groups: Wirtinger presentations, amalgamation along meridians, abelianization,
//! Alexander polynomials and 2×2 de Rham representations.

mod derham;
mod laurent;
mod presentation;
mod smith;

pub use derham::{derham_direct_sum, derham_solve, Branch, DeRhamRep, DirectSumRep, RANK_TOL, RELATOR_TOL};
pub use laurent::{alexander_from_seifert, alexander_poly_fox, fox_jacobian, LaurentPoly};
pub use presentation::{amalgamate, exponent_sum, free_reduce, inverse_word, Presentation, Word};
pub use smith::{abelianization, smith_normal_form, AbelianInvariants, IntMatrix};

/// Braid words whose closures realise catalog knots.
pub const BRAIDS: &[(&str, &[i32])] = &[
    ("3_1", &[1, 1, 1]),
    ("4_1", &[1, -2, 1, -2]),
    ("5_1", &[1, 1, 1, 1, 1]),
    ("5_2", &[1, 1, 1, 2, -1, 2]),
    ("6_1", &[1, 1, 2, -1, -3, 2, -3]),
    ("6_2", &[1, 1, 1, -2, 1, -2]),
    ("6_3", &[1, 1, -2, 1, -2, -2]),
    ("7_1", &[1, 1, 1, 1, 1, 1, 1]),
    ("7_2", &[1, 1, 1, 2, -1, 2, 3, -2, 3]),
    ("7_3", &[1, 1, 1, 1, 1, 2, -1, 2]),
    ("7_4", &[1, 1, 2, -1, 2, 2, 3, -2, 3]),
    ("7_5", &[1, 1, 1, 1, 2, -1, 2, 2]),
    ("7_6", &[1, 1, -2, 1, 3, -2, 3]),
    ("7_7", &[1, -2, 1, -2, 3, -2, 3]),
    ("8_19", &[1, 2, 1, 2, 1, 2, 1, 2]),
    ("8_20", &[1, 1, 1, -2, -1, -1, -1, -2]),
    ("8_21", &[1, 1, 1, 2, -1, -1, 2, 2]),
];

pub fn braid_for(name: &str) -> Option<&'static [i32]> {
    BRAIDS.iter().find(|(n, _)| *n == name).map(|(_, b)| *b)
}

/// Wirtinger presentation for a catalog record: its data file if present, else a known braid.
pub fn presentation_for(rec: &crate::catalog::KnotRecord) -> crate::Result<Presentation> {
    if let Some(path) = rec.wirtinger.as_ref().filter(|p| p.exists()) {
        return Presentation::read(path);
    }
    match braid_for(&rec.name) {
        Some(b) => Presentation::from_braid(b),
        None => Err(crate::Error::Precondition(format!("no Wirtinger data for {}", rec.name))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_and_figure_eight() {
        let p3 = Presentation::from_braid(braid_for("3_1").unwrap()).unwrap();
        let p4 = Presentation::from_braid(braid_for("4_1").unwrap()).unwrap();
        assert!(p3.is_wirtinger());
        assert_eq!(alexander_poly_fox(&p3).unwrap().normalized_coeffs(), vec![1, -1, 1]);
        assert_eq!(alexander_poly_fox(&p4).unwrap().normalized_coeffs(), vec![1, -3, 1]);
        let am = amalgamate(&p3, &p4).unwrap();
        assert_eq!(am.num_generators(), 7);
        assert_eq!(am.relators().len(), 8);
        assert!(abelianization(&am).is_infinite_cyclic());
    }

    #[test]
    fn free_group_and_unknot() {
        let free = Presentation::parse("a b\n").unwrap();
        assert_eq!(abelianization(&free).free_rank, 2);
        assert!(alexander_poly_fox(&free).is_err());
        assert_eq!(alexander_poly_fox(&Presentation::unknot()).unwrap(), LaurentPoly::one());
        let p3 = Presentation::from_braid(&[1, 1, 1]).unwrap();
        let am = amalgamate(&p3, &Presentation::unknot()).unwrap();
        assert_eq!(am.num_generators(), 4);
        assert!(abelianization(&am).is_infinite_cyclic());
        assert!(Presentation::from_braid(&[1, 1]).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let p = Presentation::parse("a b\n# comment\na B A b\n").unwrap();
        assert_eq!(p.relators(), &[vec![1, -2, -1, 2]]);
        assert_eq!(Presentation::parse(&p.to_text()).unwrap(), p);
        assert!(Presentation::parse("a\nc\n").is_err());
        assert_eq!(free_reduce(&[1, 2, -2, -1, 3]), vec![3]);
    }
}
