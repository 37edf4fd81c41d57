"""Request and response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class TableModel(BaseModel):
    """A finite-group multiplication table, inline or by builtin name."""

    builtin: Optional[Literal["s3"]] = None
    order: Optional[int] = None
    table: Optional[list[list[int]]] = None
    identity: Optional[int] = None
    generators: Optional[list[int]] = None

    @model_validator(mode="after")
    def _complete(self):
        if self.builtin is None:
            fields = (self.order, self.table, self.identity, self.generators)
            if any(value is None for value in fields):
                raise ValueError(
                    "table needs either a builtin name or all of "
                    "order/table/identity/generators"
                )
        return self


class GroupModel(BaseModel):
    kind: Literal[
        "free-solvable", "free-abelian", "finite", "free", "derived-of-finite"
    ]
    rank: Optional[int] = None
    degree: Optional[int] = None
    table: Optional[TableModel] = None


class WordRequest(BaseModel):
    group: GroupModel
    word: str


class PairRequest(BaseModel):
    group: GroupModel
    u: str
    v: str


class SupportRequest(BaseModel):
    group: GroupModel
    word: str
    dot: bool = False


class WordProblemResponse(BaseModel):
    trivial: bool


class PowerResponse(BaseModel):
    k: Optional[int]


class ConjugacyResponse(BaseModel):
    conjugate: bool
    conjugator: Optional[str]


class FlowRecord(BaseModel):
    tail: str
    generator: int
    value: int


class MagnusResponse(BaseModel):
    image: str
    trivial: bool
    flow: list[FlowRecord]


class SupportEdge(BaseModel):
    tail: str
    head: str
    generator: int


class SupportResponse(BaseModel):
    root: str
    vertices: list[str]
    edges: list[SupportEdge]
    dot: Optional[str] = None


class SspInstanceModel(BaseModel):
    group: GroupModel
    generators: list[str]
    target: str


class SspSolveRequest(BaseModel):
    instance: SspInstanceModel
    cap: int = 20


class SspSolveResponse(BaseModel):
    solution: Optional[list[int]]


class SspFromZoeRequest(BaseModel):
    matrix: list[list[int]]
    rank: int = 2
    cap: int = 20


class SspFromZoeResponse(BaseModel):
    instance: SspInstanceModel
    solution: Optional[list[int]]


class AgpEdgeModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    tail: int = Field(alias="from")
    to: int
    label: str


class AgpInstanceModel(BaseModel):
    group: GroupModel
    vertices: int
    edges: list[AgpEdgeModel]
    source: int
    sink: int
    target: str


class AgpSolveRequest(BaseModel):
    instance: AgpInstanceModel
    cap: int = 100_000


class AgpSolveResponse(BaseModel):
    path: Optional[list[int]]
    word: Optional[str]


class HealthResponse(BaseModel):
    status: str
