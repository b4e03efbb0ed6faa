"""
Parameters of each subcommand. A family may be given by builtin name with
``n`` next to it (``{"family": "triangle-free", "n": 16}``); it is folded
into a FamilySpec before validation.
"""

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .family import FamilySpec
from .graph import CoverSchema


class Params(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GraphSpec(BaseModel):
    """
    A graph on [n]: an explicit edge list or one of the builders. ``size``
    is the cycle length, star leaf count, matching size, clique size, or the
    edge count of a random bipartite graph (drawn with ``seed``).
    """

    model_config = ConfigDict(extra="forbid")

    kind: Literal[
        "explicit", "empty", "complete", "clique", "path", "cycle", "star",
        "matching", "petersen", "wagner", "random-bipartite", "random",
    ] = Field("explicit", example="cycle")
    n: int = Field(..., ge=1, example=64)
    size: Optional[int] = Field(None, ge=0, example=4)
    edges: Optional[List[Tuple[int, int]]] = Field(None, example=[[0, 1]])
    p: Optional[float] = Field(None, ge=0, le=1, description="edge probability of kind random")
    seed: int = Field(0, ge=0, description="seed of the random kinds")

    @model_validator(mode="after")
    def size_where_needed(self):
        if self.kind == "explicit" and self.edges is None:
            raise ValueError("an explicit graph needs edges")
        if self.kind in ("cycle", "star", "matching", "clique", "random-bipartite") and self.size is None:
            raise ValueError(f"a {self.kind} graph needs size")
        if self.kind == "random" and self.p is None:
            raise ValueError("a random graph needs p")
        return self


class WeightedGraphSpec(BaseModel):
    graph: GraphSpec
    weight: float = Field(..., ge=0)


class FamilyParams(Params):
    family: FamilySpec

    @model_validator(mode="before")
    @classmethod
    def fold_builtin_name(cls, data):
        if isinstance(data, dict) and isinstance(data.get("family"), str):
            data = dict(data)
            data["family"] = {"kind": "builtin", "name": data.pop("family"), "n": data.pop("n", None)}
        return data


class MuParams(FamilyParams):
    p: float = Field(..., ge=0, le=1)
    method: Literal["auto", "exact", "monte-carlo"] = "auto"


class ThresholdParams(FamilyParams):
    tol: Optional[float] = Field(None, gt=0)
    method: Literal["auto", "exact", "monte-carlo"] = "auto"


class QParams(FamilyParams):
    tol: Optional[float] = Field(None, gt=0)
    solver: Optional[Literal["highs", "rational"]] = None


class SandwichParams(FamilyParams):
    tol: Optional[float] = Field(None, gt=0, description="slack allowed in each inequality of the chain")


class GoodCheckParams(Params):
    h: GraphSpec
    gamma: GraphSpec
    mode: Literal["exhaustive", "sampled"] = "exhaustive"


class CouplingParams(Params):
    n: int = Field(..., ge=2)
    p: float = Field(..., ge=0, lt=1)


class MomentParams(Params):
    h: GraphSpec
    p: float = Field(..., gt=0, le=1)


class TailDirParams(MomentParams):
    loops: bool = False


class TailUndirParams(MomentParams):
    degree_filter: bool = True


class HittingParams(Params):
    family: List[GraphSpec]
    n: int = Field(..., ge=1)
    p: float = Field(..., ge=0, le=1)


class FracHittingParams(Params):
    family: List[WeightedGraphSpec]
    n: int = Field(..., ge=1)
    p: float = Field(..., ge=0, le=1)


class CliqueClasses(BaseModel):
    """All cliques of size k on [n]; k defaults to ceil(C sqrt(n) log n)."""

    k: Optional[int] = Field(None, ge=0)
    constant: Optional[float] = Field(None, gt=0, example=40)

    @model_validator(mode="after")
    def k_or_constant(self):
        if (self.k is None) == (self.constant is None):
            raise ValueError("give exactly one of k and constant")
        return self


class ConditionParams(Params):
    n: int = Field(..., ge=1)
    delta: Optional[float] = Field(None, gt=0, description="defaults to the budget for eps = 1/20, gamma = 1/10")
    family: Optional[List[GraphSpec]] = None
    weighted: Optional[List[WeightedGraphSpec]] = None
    cliques: Optional[CliqueClasses] = None

    @model_validator(mode="after")
    def one_family(self):
        given = [x is not None for x in (self.family, self.weighted, self.cliques)]
        if sum(given) != 1:
            raise ValueError("give exactly one of family, weighted and cliques")
        return self


class CoverGenParams(Params):
    n: int = Field(..., ge=2)
    k: int = Field(..., ge=2)


class CoverCheckParams(Params):
    n: Optional[int] = Field(None, ge=2)
    k: Optional[int] = Field(None, ge=2)
    cover: Optional[CoverSchema] = None
    mode: Literal["exhaustive", "sampled"] = "exhaustive"

    @model_validator(mode="after")
    def clique_or_explicit(self):
        if self.cover is None and (self.n is None or self.k is None):
            raise ValueError("give a cover or the clique cover parameters n and k")
        if self.mode == "sampled" and self.cover is not None:
            raise ValueError("the sampled mode checks clique covers only")
        return self


class AlphaParams(Params):
    graph: GraphSpec


class FboundParams(Params):
    m: int = Field(..., ge=1)
    n: int = Field(..., ge=2)
    cover_size: Optional[int] = Field(None, ge=1)
    constant: float = Field(1.0, gt=0, description="constant of the container bound annotation")


class BipartiteLbParams(Params):
    h: GraphSpec
