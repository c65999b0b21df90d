//! Gram matrix of the Leech lattice in a basis with integer coordinates.

pub(crate) const LEECH_GRAM: [[i64; 24]; 24] = [
    [8, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 2, 0, 2, 0, 2, 2, 2, 0, 0, 0, 2, 5],
    [4, 4, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 1, 2, 1, 2, 1, 1, 1, 0, 0, 2, 3],
    [4, 2, 4, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 2, 0, 1, 0, 2, 3],
    [4, 2, 2, 4, 2, 2, 2, 2, 2, 2, 2, 2, 2, 1, 1, 0, 1, 2, 2, 1, 0, 1, 2, 3],
    [4, 2, 2, 2, 4, 2, 2, 2, 2, 2, 2, 2, 2, 1, 1, 0, 2, 2, 1, 1, 1, 0, 1, 3],
    [4, 2, 2, 2, 2, 4, 2, 2, 2, 2, 2, 2, 1, 1, 2, 0, 1, 2, 2, 0, 1, 1, 1, 3],
    [4, 2, 2, 2, 2, 2, 4, 2, 2, 2, 2, 2, 1, 0, 2, 1, 1, 1, 2, 1, 0, 1, 2, 3],
    [4, 2, 2, 2, 2, 2, 2, 4, 2, 2, 2, 2, 2, 0, 2, 1, 1, 2, 2, 1, 1, 0, 1, 3],
    [4, 2, 2, 2, 2, 2, 2, 2, 4, 2, 2, 2, 1, 1, 1, 1, 2, 1, 2, 1, 1, 1, 1, 3],
    [4, 2, 2, 2, 2, 2, 2, 2, 2, 4, 2, 2, 1, 0, 2, 0, 2, 2, 1, 1, 1, 1, 2, 3],
    [4, 2, 2, 2, 2, 2, 2, 2, 2, 2, 4, 2, 2, 0, 2, 1, 2, 1, 1, 0, 1, 1, 1, 3],
    [4, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 4, 1, 1, 1, 1, 2, 2, 1, 0, 0, 1, 2, 3],
    [2, 2, 2, 2, 2, 1, 1, 2, 1, 1, 2, 1, 4, 2, 2, 2, 2, 2, 2, 2, 2, 1, 2, 3],
    [0, 1, 1, 1, 1, 1, 0, 0, 1, 0, 0, 1, 2, 4, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2],
    [2, 2, 1, 1, 1, 2, 2, 2, 1, 2, 2, 1, 2, 1, 4, 2, 2, 2, 2, 2, 2, 2, 2, 3],
    [0, 1, 1, 0, 0, 0, 1, 1, 1, 0, 1, 1, 2, 2, 2, 4, 2, 1, 2, 2, 2, 2, 2, 2],
    [2, 2, 1, 1, 2, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2, 4, 2, 1, 2, 2, 2, 2, 3],
    [2, 1, 1, 2, 2, 2, 1, 2, 1, 2, 1, 2, 2, 2, 2, 1, 2, 4, 2, 2, 2, 2, 2, 3],
    [2, 1, 2, 2, 1, 2, 2, 2, 2, 1, 1, 1, 2, 2, 2, 2, 1, 2, 4, 2, 2, 2, 2, 3],
    [0, 1, 0, 1, 1, 0, 1, 1, 1, 1, 0, 0, 2, 2, 2, 2, 2, 2, 2, 4, 2, 2, 2, 2],
    [0, 0, 1, 0, 1, 1, 0, 1, 1, 1, 1, 0, 2, 2, 2, 2, 2, 2, 2, 2, 4, 2, 1, 2],
    [0, 0, 0, 1, 0, 1, 1, 0, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2, 4, 2, 2],
    [2, 2, 2, 2, 1, 1, 2, 1, 1, 2, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 1, 2, 4, 3],
    [5, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 2, 3, 2, 3, 3, 3, 2, 2, 2, 3, 6],
];
