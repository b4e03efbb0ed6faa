from typing import Dict, List, Tuple

from pydantic import BaseModel, Field


class GraphSchema(BaseModel):
    """
    A simple graph on vertices 0..n-1.
    """

    n: int = Field(..., ge=0, description="number of vertices", example=5)
    edges: List[Tuple[int, int]] = Field(
        default_factory=list, description="edge list", example=[[0, 1], [1, 2]]
    )


class DigraphSchema(BaseModel):
    n: int = Field(..., ge=0, description="number of vertices", example=4)
    arcs: List[Tuple[int, int]] = Field(
        default_factory=list, description="arcs (source, target)", example=[[0, 1], [1, 0]]
    )
    loops_allowed: bool = Field(False, description="whether self-loops may occur")


class CertificateSchema(BaseModel):
    """
    Members as bit-strings; character i is element i.
    """

    ground_size: int = Field(..., ge=1, description="size N of the ground set", example=2)
    members: List[str] = Field(default_factory=list, example=["10", "01"])


class FractionalCertificateSchema(BaseModel):
    ground_size: int = Field(..., ge=1, description="size N of the ground set", example=2)
    weights: Dict[str, float] = Field(
        default_factory=dict, description="weight per bit-string", example={"10": 1.0}
    )


class CoverSchema(BaseModel):
    n: int = Field(..., ge=1, description="number of vertices", example=6)
    m: int = Field(..., ge=0, description="common number of non-edges", example=3)
    relaxed: bool = Field(False, description="members may have more than C(n,2) - m edges")
    members: List[List[Tuple[int, int]]] = Field(default_factory=list)
