from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class InstanceDoc(BaseModel):
    """A (G, H[, N]) instance; every permutation in 1-based cycle notation."""
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    degree: int = Field(ge=1)
    group_gens: List[str] = Field(alias="group")
    subgroup_H_gens: List[str] = Field(alias="subgroup_H")
    normal_N_gens: Optional[List[str]] = Field(default=None, alias="normal_N")
    label: str = ""


class PreconditionsDoc(BaseModel):
    core_trivial: bool
    condition_ii: bool
    generates_over_H: bool


class Section5Doc(BaseModel):
    quotient_generators: List[str]
    representatives: List[str]
    H_prime_order: int
    m: int
    transversal: List[str]


class ReportDoc(BaseModel):
    provenance: str
    label: str = ""
    bound: int
    generating_tuple: List[str]
    dropped_from_H: List[str] = []
    stabilizer_indices: List[int]
    index_G_H: int
    rank_M: int
    faithful: bool
    valid: bool
    preconditions: PreconditionsDoc
    csa_bound: Optional[int] = None
    section5: Optional[Section5Doc] = None
    note: str


class ScalarBoundDoc(BaseModel):
    """A bare bound value with the parameters it was computed from (csa, pgl)."""
    provenance: str
    label: str = ""
    bound: int
    parameters: Dict[str, int]


class CompareRowDoc(BaseModel):
    p: int
    s: int
    n: int
    procesi: int
    eq1_all_n: int
    eq1_odd_n: Optional[int] = None
    prior_mr: int
    new: int
    min_prior: int
    minimum: int


class CompareTableDoc(BaseModel):
    p: int
    rows: List[CompareRowDoc]


class SuiteResultDoc(BaseModel):
    suite: str
    max_order: int
    passed: bool
    checked: int
    counts: Dict[str, int]
    failures: List[str]
