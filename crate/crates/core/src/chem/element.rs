//! Periodic table data: symbols, standard atomic weights and default valences.

use std::fmt;

/// A chemical element, stored as its atomic number.
///
/// Atomic number 0 is never produced by the parser; it is only used as the
/// isoelectronic target of `[H+]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u8);

// (symbol, conventional standard atomic weight)
const TABLE: [(&str, f64); 103] = [
    ("H", 1.008),
    ("He", 4.003),
    ("Li", 6.94),
    ("Be", 9.012),
    ("B", 10.81),
    ("C", 12.011),
    ("N", 14.007),
    ("O", 15.999),
    ("F", 18.998),
    ("Ne", 20.180),
    ("Na", 22.990),
    ("Mg", 24.305),
    ("Al", 26.982),
    ("Si", 28.085),
    ("P", 30.974),
    ("S", 32.06),
    ("Cl", 35.45),
    ("Ar", 39.948),
    ("K", 39.098),
    ("Ca", 40.078),
    ("Sc", 44.956),
    ("Ti", 47.867),
    ("V", 50.942),
    ("Cr", 51.996),
    ("Mn", 54.938),
    ("Fe", 55.845),
    ("Co", 58.933),
    ("Ni", 58.693),
    ("Cu", 63.546),
    ("Zn", 65.38),
    ("Ga", 69.723),
    ("Ge", 72.630),
    ("As", 74.922),
    ("Se", 78.971),
    ("Br", 79.904),
    ("Kr", 83.798),
    ("Rb", 85.468),
    ("Sr", 87.62),
    ("Y", 88.906),
    ("Zr", 91.224),
    ("Nb", 92.906),
    ("Mo", 95.95),
    ("Tc", 98.0),
    ("Ru", 101.07),
    ("Rh", 102.906),
    ("Pd", 106.42),
    ("Ag", 107.868),
    ("Cd", 112.414),
    ("In", 114.818),
    ("Sn", 118.710),
    ("Sb", 121.760),
    ("Te", 127.60),
    ("I", 126.904),
    ("Xe", 131.293),
    ("Cs", 132.905),
    ("Ba", 137.327),
    ("La", 138.905),
    ("Ce", 140.116),
    ("Pr", 140.908),
    ("Nd", 144.242),
    ("Pm", 145.0),
    ("Sm", 150.36),
    ("Eu", 151.964),
    ("Gd", 157.25),
    ("Tb", 158.925),
    ("Dy", 162.500),
    ("Ho", 164.930),
    ("Er", 167.259),
    ("Tm", 168.934),
    ("Yb", 173.045),
    ("Lu", 174.967),
    ("Hf", 178.49),
    ("Ta", 180.948),
    ("W", 183.84),
    ("Re", 186.207),
    ("Os", 190.23),
    ("Ir", 192.217),
    ("Pt", 195.084),
    ("Au", 196.967),
    ("Hg", 200.592),
    ("Tl", 204.38),
    ("Pb", 207.2),
    ("Bi", 208.980),
    ("Po", 209.0),
    ("At", 210.0),
    ("Rn", 222.0),
    ("Fr", 223.0),
    ("Ra", 226.0),
    ("Ac", 227.0),
    ("Th", 232.038),
    ("Pa", 231.036),
    ("U", 238.029),
    ("Np", 237.0),
    ("Pu", 244.0),
    ("Am", 243.0),
    ("Cm", 247.0),
    ("Bk", 247.0),
    ("Cf", 251.0),
    ("Es", 252.0),
    ("Fm", 257.0),
    ("Md", 258.0),
    ("No", 259.0),
    ("Lr", 262.0),
];

impl Element {
    pub const H: Element = Element(1);
    pub const B: Element = Element(5);
    pub const C: Element = Element(6);
    pub const N: Element = Element(7);
    pub const O: Element = Element(8);
    pub const F: Element = Element(9);
    pub const P: Element = Element(15);
    pub const S: Element = Element(16);
    pub const CL: Element = Element(17);
    pub const BR: Element = Element(35);
    pub const I: Element = Element(53);

    pub fn from_atomic_number(z: u8) -> Option<Element> {
        (1..=TABLE.len() as u8).contains(&z).then_some(Element(z))
    }

    pub fn from_symbol(symbol: &str) -> Option<Element> {
        TABLE
            .iter()
            .position(|(s, _)| *s == symbol)
            .map(|i| Element(i as u8 + 1))
    }

    pub fn atomic_number(self) -> u8 {
        self.0
    }

    pub fn symbol(self) -> &'static str {
        TABLE[self.0 as usize - 1].0
    }

    /// Standard atomic weight in daltons.
    pub fn mass(self) -> f64 {
        TABLE[self.0 as usize - 1].1
    }

    /// Whether the element may be written without brackets in SMILES.
    pub fn is_organic_subset(self) -> bool {
        matches!(self.0, 5 | 6 | 7 | 8 | 9 | 15 | 16 | 17 | 35 | 53)
    }

    /// Whether the element may appear as a lowercase aromatic symbol.
    pub fn can_be_aromatic(self) -> bool {
        matches!(self.0, 5 | 6 | 7 | 8 | 15 | 16 | 33 | 34 | 52)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Default valences for main-group elements, indexed by atomic number.
fn neutral_valences(z: i32) -> Option<&'static [u8]> {
    Some(match z {
        0 | 2 | 10 | 18 | 36 | 54 | 86 => &[0],
        1 | 3 | 9 | 11 | 17 | 19 | 35 | 37 | 55 | 87 => &[1],
        4 | 12 | 20 | 38 | 56 | 88 => &[2],
        5 | 13 | 31 | 49 => &[3],
        6 | 14 | 32 => &[4],
        50 | 82 => &[2, 4],
        7 => &[3],
        15 | 33 | 51 => &[3, 5],
        83 => &[3],
        8 => &[2],
        16 | 34 | 52 => &[2, 4, 6],
        53 => &[1, 3, 5],
        _ => return None,
    })
}

/// Allowed valences of an element carrying a formal charge.
///
/// A charged atom takes the valences of its isoelectronic neighbour
/// (N+ behaves like C, O- like F, C- like N). Elements without a
/// default valence table (transition metals, lanthanides) return `None`
/// and are not valence-checked.
pub fn allowed_valences(element: Element, charge: i8) -> Option<&'static [u8]> {
    let z = element.atomic_number() as i32;
    neutral_valences(z)?;
    let shifted = z - charge as i32;
    if shifted < 0 {
        return None;
    }
    // Stay within the same block: an isoelectronic target without a table
    // means the charge state is outside what the table describes.
    neutral_valences(shifted)
}
