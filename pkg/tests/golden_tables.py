"""
Golden tables
Printed values of the cycle, subset and quasi-Eulerian tables, keyed by (family, r)
"""

from typing import Dict, List, Tuple

# family -> r -> row n -> printed entries (trailing implicit zeros omitted)
TABLES: Dict[Tuple[str, int], Dict[int, List[int]]] = {
    ("cycle", 1): {
        0: [1],
        1: [0, 1],
        2: [0, 1, 1],
        3: [0, 2, 3, 1],
        4: [0, 6, 11, 6, 1],
        5: [0, 24, 50, 35, 10, 1],
        6: [0, 120, 274, 225, 85, 15, 1],
        7: [0, 720, 1764, 1624, 735, 175, 21, 1],
        8: [0, 5040, 13068, 13132, 6769, 1960, 322, 28, 1],
    },
    ("cycle", 2): {
        0: [1],
        1: [0, 1],
        2: [0, 2, 3],
        3: [0, 6, 20, 15],
        4: [0, 24, 130, 210, 105],
        5: [0, 120, 924, 2380, 2520, 945],
        6: [0, 720, 7308, 26432, 44100, 34650, 10395],
        7: [0, 5040, 64224, 303660, 705320, 866250, 540540, 135135],
        8: [0, 40320, 623376, 3678840, 11098780, 18858840, 18288270, 9459450, 2027025],
    },
    ("cycle", 3): {
        0: [1],
        1: [0, 2],
        2: [0, 6, 40],
        3: [0, 24, 420, 2240],
        4: [0, 120, 3948, 50400, 246400],
        5: [0, 720, 38304, 859320, 9609600, 44844800],
        6: [0, 5040, 396576, 13665960, 258978720, 2690688000, 12197785600],
        7: [0, 40320, 4419360, 216339552, 6112906800, 105205900800, 1042910668800, 4635158528000],
    },
    ("cycle", 4): {
        0: [1],
        1: [0, 6],
        2: [0, 24, 1260],
        3: [0, 120, 18144, 1247400],
        4: [0, 720, 223776, 38918880, 3405402000],
        5: [0, 5040, 2756160, 889945056, 185253868800, 19799007228000],
        6: [0, 40320, 35307360, 18478684224, 6780291598080, 1663116607152000, 210384250804728000],
    },
    ("subset", 1): {
        0: [1],
        1: [0, 1],
        2: [0, 1, 1],
        3: [0, 1, 3, 1],
        4: [0, 1, 7, 6, 1],
        5: [0, 1, 15, 25, 10, 1],
        6: [0, 1, 31, 90, 65, 15, 1],
        7: [0, 1, 63, 301, 350, 140, 21, 1],
        8: [0, 1, 127, 966, 1701, 1050, 266, 28, 1],
    },
    ("subset", 2): {
        0: [1],
        1: [0, 1],
        2: [0, 1, 3],
        3: [0, 1, 10, 15],
        4: [0, 1, 25, 105, 105],
        5: [0, 1, 56, 490, 1260, 945],
        6: [0, 1, 119, 1918, 9450, 17325, 10395],
        7: [0, 1, 246, 6825, 56980, 190575, 270270, 135135],
        8: [0, 1, 501, 22935, 302995, 1636635, 4099095, 4729725, 2027025],
    },
    ("subset", 3): {
        0: [1],
        1: [0, 1],
        2: [0, 1, 10],
        3: [0, 1, 35, 280],
        4: [0, 1, 91, 2100, 15400],
        5: [0, 1, 210, 10395, 200200, 1401400],
        6: [0, 1, 456, 42735, 1611610, 28028000, 190590400],
        7: [0, 1, 957, 158301, 10335325, 333533200, 5431826400, 36212176000],
        8: [0, 1, 1969, 549549, 57962905, 3073270200, 89625135600, 1394168776000, 9161680528000],
    },
    ("subset", 4): {
        0: [1],
        1: [0, 1],
        2: [0, 1, 35],
        3: [0, 1, 126, 5775],
        4: [0, 1, 336, 45045, 2627625],
        5: [0, 1, 792, 231231, 35735700, 2546168625],
        6: [0, 1, 1749, 981981, 300179880, 53469541125, 4509264634875],
        7: [0, 1, 3718, 3741738, 2002016016, 666586946025, 135277939046250, 13189599057009375],
    },
    ("quasi-cycle", 1): {
        0: [1],
        1: [1, 0],
        2: [0, 1, 0],
        3: [0, -1, 2, 0],
        4: [0, 2, -7, 6, 0],
        5: [0, -6, 29, -46, 24, 0],
        6: [0, 24, -146, 329, -326, 120, 0],
        7: [0, -120, 874, -2521, 3604, -2556, 720, 0],
        8: [0, 720, -6084, 21244, -39271, 40564, -22212, 5040, 0],
    },
    ("quasi-cycle", 2): {
        0: [1],
        1: [1],
        2: [1, 2],
        3: [1, 8, 6],
        4: [1, 22, 58, 24],
        5: [1, 52, 328, 444, 120],
        6: [1, 114, 1452, 4400, 3708, 720],
        7: [1, 240, 5610, 32120, 58140, 33984, 5040],
        8: [1, 494, 19950, 195800, 644020, 785304, 341136, 40320],
    },
    ("quasi-cycle", 3): {
        0: [1],
        1: [2],
        2: [34, 6],
        3: [1844, 372, 24],
        4: [199828, 42864, 3588, 120],
        5: [36056936, 8002992, 748728, 35424, 720],
        6: [9752801896, 2212167336, 220309896, 12130056, 371376, 5040],
        7: [3691552813712, 849994084272, 88121628912, 5290935792, 194847552, 4177440, 40320],
    },
    ("quasi-cycle", 4): {
        0: [1],
        1: [6],
        2: [1236, 24],
        3: [1229376, 17904, 120],
        4: [3366706176, 38473488, 221616, 720],
        5: [19614640553136, 183482227008, 881706816, 2736000, 5040],
        6: [208727896045756896, 1649611318980672, 6725066986368, 18337857984, 35105760, 40320],
    },
    ("quasi-cycle", 5): {
        0: [1],
        1: [24],
        2: [72456, 120],
        3: [1742235984, 1329120, 720],
        4: [162123744912336, 69701970960, 20323440, 5040],
        5: [41351875243477668864, 11349535075620480, 2003358856320, 303776640, 40320],
    },
    ("quasi-subset", 1): {
        0: [1],
        1: [1, 0],
        2: [0, 1, 0],
        3: [-1, 1, 1, 0],
        4: [1, -5, 4, 1, 0],
        5: [2, 1, -14, 11, 1, 0],
        6: [-9, 36, -29, -24, 26, 1, 0],
        7: [9, -104, 281, -244, 1, 57, 1, 0],
        8: [50, -83, -454, 1401, -1259, 225, 120, 1, 0],
    },
    ("quasi-subset", 2): {
        0: [1],
        1: [1],
        2: [2, 1],
        3: [6, 8, 1],
        4: [24, 58, 22, 1],
        5: [120, 444, 328, 52, 1],
        6: [720, 3708, 4400, 1452, 114, 1],
        7: [5040, 33984, 58140, 32120, 5610, 240, 1],
        8: [40320, 341136, 785304, 644020, 195800, 19950, 494, 1],
    },
    ("quasi-subset", 3): {
        0: [1],
        1: [1],
        2: [9, 1],
        3: [246, 33, 1],
        4: [13390, 1921, 88, 1],
        5: [1211386, 180036, 9771, 206, 1],
        6: [164131730, 24931166, 1486131, 40921, 451, 1],
        7: [31103704820, 4795137550, 303467476, 9711671, 153531, 951, 1],
        8: [7854121032724, 1223909199718, 80747636454, 2846874725, 55244660, 537756, 1962, 1],
    },
    ("quasi-subset", 4): {
        0: [1],
        1: [1],
        2: [34, 1],
        3: [5650, 124, 1],
        4: [2582915, 44376, 333, 1],
        5: [2510663365, 35275610, 228861, 788, 1],
        6: [4456094293397, 52872120317, 297244421, 974995, 1744, 1],
        7: [13054985706631155, 133950756253880, 660603311240, 1987086224, 3723163, 3712, 1],
    },
    ("quasi-subset", 5): {
        0: [1],
        1: [1],
        2: [125, 1],
        3: [125665, 460, 1],
        4: [487856621, 1006503, 1251, 1],
        5: [5187834064414, 6833491661, 5300301, 2999, 1],
        6: [123266182967274060, 112433009305765, 59083404656, 23048178, 6716, 1],
    },
}

ROW_SUMS: Dict[Tuple[str, int], Dict[int, int]] = {
    ("cycle", 1): {
        0: 1,
        1: 1,
        2: 2,
        3: 6,
        4: 24,
        5: 120,
        6: 720,
        7: 5040,
        8: 40320,
    },
    ("cycle", 2): {
        0: 1,
        1: 1,
        2: 5,
        3: 41,
        4: 469,
        5: 6889,
        6: 123605,
        7: 2620169,
        8: 64074901,
    },
    ("cycle", 3): {
        0: 1,
        1: 2,
        2: 46,
        3: 2684,
        4: 300868,
        5: 55352744,
        6: 15161519896,
        7: 5789608803632,
    },
    ("cycle", 4): {
        0: 1,
        1: 6,
        2: 1284,
        3: 1265664,
        4: 3444545376,
        5: 19985153803056,
        6: 212054166217509984,
    },
    ("subset", 1): {
        0: 1,
        1: 1,
        2: 2,
        3: 5,
        4: 15,
        5: 52,
        6: 203,
        7: 877,
        8: 4140,
    },
    ("subset", 2): {
        0: 1,
        1: 1,
        2: 4,
        3: 26,
        4: 236,
        5: 2752,
        6: 39208,
        7: 660032,
        8: 12818912,
    },
    ("subset", 3): {
        0: 1,
        1: 1,
        2: 11,
        3: 316,
        4: 17592,
        5: 1612206,
        6: 220273202,
        7: 41988030184,
        8: 10648606224224,
    },
    ("subset", 4): {
        0: 1,
        1: 1,
        2: 36,
        3: 5902,
        4: 2673007,
        5: 2582136349,
        6: 4563035339611,
        7: 13325545588763123,
    },
    ("quasi-cycle", 1): {
        0: 1,
        1: 1,
        2: 1,
        3: 1,
        4: 1,
        5: 1,
        6: 1,
        7: 1,
        8: 1,
    },
    ("quasi-cycle", 2): {
        0: 1,
        1: 1,
        2: 3,
        3: 15,
        4: 105,
        5: 945,
        6: 10395,
        7: 135135,
        8: 2027025,
    },
    ("quasi-cycle", 3): {
        0: 1,
        1: 2,
        2: 40,
        3: 2240,
        4: 246400,
        5: 44844800,
        6: 12197785600,
        7: 4635158528000,
    },
    ("quasi-cycle", 4): {
        0: 1,
        1: 6,
        2: 1260,
        3: 1247400,
        4: 3405402000,
        5: 19799007228000,
        6: 210384250804728000,
    },
    ("quasi-cycle", 5): {
        0: 1,
        1: 24,
        2: 72576,
        3: 1743565824,
        4: 162193467211776,
        5: 41363226782215962624,
    },
    ("quasi-subset", 1): {
        0: 1,
        1: 1,
        2: 1,
        3: 1,
        4: 1,
        5: 1,
        6: 1,
        7: 1,
        8: 1,
    },
    ("quasi-subset", 2): {
        0: 1,
        1: 1,
        2: 3,
        3: 15,
        4: 105,
        5: 945,
        6: 10395,
        7: 135135,
        8: 2027025,
    },
    ("quasi-subset", 3): {
        0: 1,
        1: 1,
        2: 10,
        3: 280,
        4: 15400,
        5: 1401400,
        6: 190590400,
        7: 36212176000,
        8: 9161680528000,
    },
    ("quasi-subset", 4): {
        0: 1,
        1: 1,
        2: 35,
        3: 5775,
        4: 2627625,
        5: 2546168625,
        6: 4509264634875,
        7: 13189599057009375,
    },
    ("quasi-subset", 5): {
        0: 1,
        1: 1,
        2: 126,
        3: 126126,
        4: 488864376,
        5: 5194672859376,
        6: 123378675083039376,
    },
}


def padded(row: List[int], n: int) -> List[int]:
    """Printed row extended with the implicit zeros up to n+1 entries"""
    return list(row) + [0] * (n + 1 - len(row))
