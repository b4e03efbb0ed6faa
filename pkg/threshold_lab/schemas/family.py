from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator


class FamilySpec(BaseModel):
    """
    A monotone family as declared in a config: a named builtin, an explicit
    member list, or the up/down closure of generators. Masks are bit-strings
    whose character i is element i.
    """

    kind: Literal["builtin", "explicit", "closure"] = Field(
        ..., description="how the family is given", example="builtin"
    )
    name: Optional[Literal["triangle-free", "clique-free-r"]] = Field(
        None, description="builtin family name", example="triangle-free"
    )
    n: Optional[int] = Field(None, ge=3, description="vertex count of a builtin graph family", example=16)
    ground_size: Optional[int] = Field(None, ge=1, le=24, description="size N of the ground set", example=2)
    direction: Optional[Literal["up", "down"]] = Field(None, example="down")
    members: Optional[List[str]] = Field(None, example=["00", "10", "01"])
    generators: Optional[List[str]] = Field(None, example=["10", "01"])

    @model_validator(mode="after")
    def fields_match_kind(self):
        if self.kind == "builtin":
            if self.name is None or self.n is None:
                raise ValueError("a builtin family needs name and n")
            return self
        if self.ground_size is None or self.direction is None:
            raise ValueError(f"a {self.kind} family needs ground_size and direction")
        masks = self.members if self.kind == "explicit" else self.generators
        if masks is None:
            raise ValueError(
                "an explicit family needs members" if self.kind == "explicit" else "a closure needs generators"
            )
        for text in masks:
            if len(text) != self.ground_size or set(text) - {"0", "1"}:
                raise ValueError(f"{text!r} is not a bit-string of length {self.ground_size}")
        return self
