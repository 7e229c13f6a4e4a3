"""Embedded quantum-defect data (version 1).

Modified Rydberg-Ritz coefficients (delta0, delta2) for the S, P, D and F
series of the alkali atoms, keyed by atomic number and (l, 2j).  Series above
F, and all hydrogen series, are treated as hydrogenic (zero defect).  Values
are the commonly tabulated spectroscopic fits (Lorenzen/Niemax lineage for
Li, Na, K; Li/Mack lineage for Rb; Weber/Sansonetti lineage for Cs).

Isotope masses are atomic masses (nucleus plus electrons) in unified atomic
mass units.
"""

DEFECT_TABLE_VERSION = 1

# Z -> {(l, j2): (delta0, delta2)}
RYDBERG_RITZ: dict[int, dict[tuple[int, int], tuple[float, float]]] = {
    1: {},
    3: {
        (0, 1): (0.3995101, 0.029),
        (1, 1): (0.0471835, -0.024),
        (1, 3): (0.0471720, -0.024),
        (2, 3): (0.002129, -0.01491),
        (2, 5): (0.002129, -0.01491),
        (3, 5): (0.000305, -0.00126),
        (3, 7): (0.000305, -0.00126),
    },
    11: {
        (0, 1): (1.34796938, 0.0609892),
        (1, 1): (0.85544502, 0.112067),
        (1, 3): (0.85462615, 0.112344),
        (2, 3): (0.014909286, -0.042506),
        (2, 5): (0.01492422, -0.042585),
        (3, 5): (0.001632977, -0.0069906),
        (3, 7): (0.001630875, -0.0069824),
    },
    19: {
        (0, 1): (2.180197, 0.136),
        (1, 1): (1.713892, 0.2332),
        (1, 3): (1.710848, 0.2354),
        (2, 3): (0.27697, -1.0249),
        (2, 5): (0.277158, -1.0256),
        (3, 5): (0.010098, -0.100224),
        (3, 7): (0.010098, -0.100224),
    },
    37: {
        (0, 1): (3.1311804, 0.1784),
        (1, 1): (2.6548849, 0.2900),
        (1, 3): (2.6416737, 0.2950),
        (2, 3): (1.34809171, -0.60286),
        (2, 5): (1.34646572, -0.59600),
        (3, 5): (0.0165192, -0.085),
        (3, 7): (0.0165437, -0.086),
    },
    55: {
        (0, 1): (4.0493532, 0.2391),
        (1, 1): (3.5915871, 0.36273),
        (1, 3): (3.5590676, 0.37469),
        (2, 3): (2.4754562, 0.00932),
        (2, 5): (2.4663144, 0.01381),
        (3, 5): (0.03341424, -0.198674),
        (3, 7): (0.033537, -0.191),
    },
}

# (Z, A) -> atomic mass in u
ISOTOPE_MASSES_U: dict[tuple[int, int], float] = {
    (1, 1): 1.00782503224,
    (3, 6): 6.0151228874,
    (3, 7): 7.0160034366,
    (11, 23): 22.9897692820,
    (19, 39): 38.9637064864,
    (19, 40): 39.9639981660,
    (19, 41): 40.9618252579,
    (37, 85): 84.9117897379,
    (37, 87): 86.9091805310,
    (55, 133): 132.9054519610,
    (55, 137): 136.9070892,
}

ELEMENT_NAMES = {1: "H", 3: "Li", 11: "Na", 19: "K", 37: "Rb", 55: "Cs"}
