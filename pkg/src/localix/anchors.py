"""Reference labels attached to every check record.

Reports cite the statement each check instantiates so a failing record can
be traced to the identity it exercises. The labels are report data only.
"""

ANCHORS = {
    "monad-laws": "Eq. 2.1",
    "em-module": "Eq. 2.2",
    "em-morphism": "Eq. 2.2",
    "free-module": "Eq. 2.3",
    "adjunction": "Eq. 2.4",
    "generator": "Prop 3.1",
    "functor-exact": "Prop 3.1",
    "derivation": "Eq. 3.1",
    "module-derivation": "Eq. 3.5",
    "derivation-enumeration": "Def 3.5",
    "left-ideals": "Def 2.3",
    "gabriel-filter": "Prop 2.2",
    "filter-enumeration": "Cor 3.4",
    "filter-intersection": "Prop 2.2",
    "torsion-class": "Eq. 3.3",
    "torsion-radical": "Eq. 3.4",
    "torsion-theory": "Eq. 2.6",
    "radical-idempotent": "Eq. 2.5",
    "radical-hereditary": "Eq. 2.5",
    "filter-of-radical": "Eq. 2.7",
    "delta-invariance": "Thm 3.4",
    "differential": "Thm 3.7",
    "module-of-quotients": "Eq. 4.1",
    "phi": "Eq. 4.2",
    "colimit": "Eq. 4.1",
    "extension": "Lemma 4.1",
    "lift": "Lemma 4.2",
    "extension-derivation": "Thm 4.3",
    "unique-lift": "Thm 4.4",
    "general-extension": "Thm 4.5",
    "j-invariance": "Lemma 4.1",
    "left-exact": "Eq. 4.3",
}


def anchor(check):
    return ANCHORS[check]
