use serde::{Deserialize, Serialize};

/// Leniency class of a tile: rewarding (P), punishing (N) or neutral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LenientClass {
    P,
    N,
    Neutral,
}

/// The 13 tile types, in code order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum Tile {
    Air = 0,
    Ground = 1,
    Destructible = 2,
    QuestionPowerUp = 3,
    QuestionCoin = 4,
    Coin = 5,
    TubeTopLeft = 6,
    TubeTopRight = 7,
    TubeBody = 8,
    BulletBillColumn = 9,
    PiranhaTube = 10,
    Platform = 11,
    Enemy = 12,
}

pub const TILE_COUNT: usize = 13;

impl Tile {
    pub const ALL: [Tile; TILE_COUNT] = [
        Tile::Air,
        Tile::Ground,
        Tile::Destructible,
        Tile::QuestionPowerUp,
        Tile::QuestionCoin,
        Tile::Coin,
        Tile::TubeTopLeft,
        Tile::TubeTopRight,
        Tile::TubeBody,
        Tile::BulletBillColumn,
        Tile::PiranhaTube,
        Tile::Platform,
        Tile::Enemy,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Tile> {
        Self::ALL.get(code as usize).copied()
    }

    /// The player can stand on it; the simulator also treats these as solid.
    pub fn standable(self) -> bool {
        matches!(
            self,
            Tile::Ground
                | Tile::Destructible
                | Tile::QuestionPowerUp
                | Tile::QuestionCoin
                | Tile::TubeTopLeft
                | Tile::TubeTopRight
                | Tile::BulletBillColumn
                | Tile::Platform
        )
    }

    /// Tubes, enemies, destructible and question blocks, bullet bill columns.
    pub fn pretty(self) -> bool {
        matches!(
            self,
            Tile::TubeTopLeft
                | Tile::TubeTopRight
                | Tile::TubeBody
                | Tile::PiranhaTube
                | Tile::Enemy
                | Tile::Destructible
                | Tile::QuestionPowerUp
                | Tile::QuestionCoin
                | Tile::BulletBillColumn
        )
    }

    pub fn enemy(self) -> bool {
        self == Tile::Enemy
    }

    pub fn lenient_class(self) -> LenientClass {
        match self {
            Tile::QuestionPowerUp => LenientClass::P,
            Tile::BulletBillColumn | Tile::PiranhaTube | Tile::Enemy => LenientClass::N,
            _ => LenientClass::Neutral,
        }
    }

    pub fn glyph(self) -> char {
        match self {
            Tile::Air => '-',
            Tile::Ground => 'X',
            Tile::Destructible => 'S',
            Tile::QuestionPowerUp => 'Q',
            Tile::QuestionCoin => '?',
            Tile::Coin => 'o',
            Tile::TubeTopLeft => '<',
            Tile::TubeTopRight => '>',
            Tile::TubeBody => '|',
            Tile::BulletBillColumn => 'B',
            Tile::PiranhaTube => 'p',
            Tile::Platform => '#',
            Tile::Enemy => 'E',
        }
    }

    pub fn from_glyph(c: char) -> Option<Tile> {
        Self::ALL.into_iter().find(|t| t.glyph() == c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_and_glyphs_are_bijective() {
        for (i, t) in Tile::ALL.iter().enumerate() {
            assert_eq!(t.code() as usize, i);
            assert_eq!(Tile::from_code(i as u8), Some(*t));
            assert_eq!(Tile::from_glyph(t.glyph()), Some(*t));
        }
        assert_eq!(Tile::from_code(13), None);
    }

    #[test]
    fn flag_table() {
        let standable = Tile::ALL.iter().filter(|t| t.standable()).count();
        let pretty = Tile::ALL.iter().filter(|t| t.pretty()).count();
        assert_eq!(standable, 8);
        assert_eq!(pretty, 9);
        assert!(!Tile::TubeBody.standable());
        assert!(Tile::TubeBody.pretty());
        assert!(!Tile::Coin.pretty());
        assert_eq!(Tile::Enemy.lenient_class(), LenientClass::N);
    }
}
