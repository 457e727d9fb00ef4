"""Expected DP tables for the two-atom program on its width-1 hand decomposition.

Keys are the node numbers of that decomposition; each entry is rendered as
``(M, C, R, [order], rho, lam, (RD, AD, DH, DB, phi))``.
"""

GOLDEN = {
    1: {
        "({}, {}, {}, [], {}, {}, ({}, {}, {}, {}, {}))",
    },
    2: {
        "({}, {}, {}, [], {}, {}, ({}, {}, {}, {}, {}))",
        "({p1}, {}, {}, [p1], {}, {}, ({}, {}, {}, {}, {}))",
    },
    3: {
        "({}, {}, {}, [], {(c1,0)}, {}, ({}, {}, {}, {}, {}))",
        "({}, {c1}, {}, [c1], {(c1,0)}, {(c1,0)}, ({}, {}, {}, {}, {}))",
        "({}, {c1}, {}, [c1], {(c1,0)}, {(c1,0)}, ({}, {}, {c1}, {}, {(c1,0)}))",
        "({p1}, {}, {}, [p1], {(c1,1)}, {}, ({}, {}, {}, {}, {}))",
        "({p1}, {c1}, {}, [c1,p1], {(c1,1)}, {(c1,0)}, ({}, {}, {}, {}, {}))",
        "({p1}, {c1}, {}, [c1,p1], {(c1,1)}, {(c1,0)}, ({}, {p1}, {c1}, {}, {(c1,0)}))",
        "({p1}, {c1}, {}, [p1,c1], {(c1,1)}, {(c1,1)}, ({}, {}, {}, {}, {}))",
        "({p1}, {c1}, {}, [p1,c1], {(c1,1)}, {(c1,1)}, ({}, {}, {c1}, {}, {(c1,0)}))",
    },
    4: {
        "({}, {}, {}, [], {(c1,0)}, {}, ({}, {}, {}, {}, {}))",
        "({}, {c1}, {}, [c1], {(c1,0)}, {(c1,0)}, ({}, {}, {}, {}, {}))",
        "({}, {c1}, {}, [c1], {(c1,0)}, {(c1,0)}, ({}, {}, {c1}, {}, {(c1,0)}))",
        "({}, {c1}, {}, [c1], {(c1,1)}, {(c1,0)}, ({}, {}, {c1}, {}, {(c1,0)}))",
    },
    5: {
        "({}, {}, {}, [r1], {(c1,0)}, {}, ({}, {}, {}, {}, {}))",
        "({}, {c1}, {r1}, [r1,c1], {(c1,0)}, {(c1,0)}, ({}, {}, {}, {}, {}))",
        "({}, {c1}, {r1}, [c1,r1], {(c1,0)}, {(c1,0)}, ({}, {}, {}, {}, {}))",
        "({}, {c1}, {r1}, [r1,c1], {(c1,0)}, {(c1,0)}, ({r1}, {}, {c1}, {}, {(c1,1)}))",
        "({}, {c1}, {r1}, [r1,c1], {(c1,0)}, {(c1,0)}, ({}, {}, {c1}, {}, {(c1,0)}))",
        "({}, {c1}, {r1}, [c1,r1], {(c1,0)}, {(c1,0)}, ({}, {}, {c1}, {}, {(c1,0)}))",
        "({}, {c1}, {r1}, [r1,c1], {(c1,1)}, {(c1,0)}, ({r1}, {}, {c1}, {}, {(c1,1)}))",
        "({}, {c1}, {r1}, [r1,c1], {(c1,1)}, {(c1,0)}, ({}, {}, {c1}, {}, {(c1,0)}))",
        "({}, {c1}, {r1}, [c1,r1], {(c1,1)}, {(c1,0)}, ({}, {}, {c1}, {}, {(c1,0)}))",
    },
    6: {
        "({}, {}, {}, [r1], {}, {}, ({}, {}, {}, {}, {}))",
        "({}, {}, {r1}, [r1], {}, {}, ({r1}, {}, {}, {}, {}))",
    },
    12: {
        "({}, {}, {}, [r1], {}, {}, ({}, {}, {}, {}, {}))",
        "({}, {}, {}, [r1], {}, {}, ({r1}, {}, {}, {}, {}))",
    },
    13: {
        "({}, {}, {}, [r1], {}, {}, ({}, {}, {}, {}, {}))",
        "({}, {}, {r1}, [r1], {}, {}, ({r1}, {}, {}, {}, {}))",
    },
    14: {
        "({}, {}, {}, [], {}, {}, ({}, {}, {}, {}, {}))",
    },
}
