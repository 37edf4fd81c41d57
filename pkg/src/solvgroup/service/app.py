"""HTTP service exposing the decision procedures.

The service keeps one oracle per distinct group specification for the
lifetime of the process, so canonical-key and representative caches warm
up across requests. Domain errors map to status 400 with a machine-usable
``detail.code`` (``invalid-input`` or ``cap-exceeded``).
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..digraph import build_support_graph, from_support_graph, to_dot
from ..errors import CapExceededError, SolvGroupError
from ..flows import CayleyContext, FlowMap, flow_of
from ..knapsack import (
    AgpInstance,
    SspInstance,
    ZoeInstance,
    agp_solve_brute,
    ssp_solve_brute,
    zoe_to_ssp,
)
from ..magnus import GroupSpec, magnus_image, make_oracle
from ..oracles import S3_TABLE, GroupOracle, MulTable
from ..words import Word, parse_word
from . import schemas


def _group_spec(model: schemas.GroupModel) -> GroupSpec:
    table = None
    if model.table is not None:
        if model.table.builtin == "s3":
            table = S3_TABLE
        else:
            table = MulTable(
                order=model.table.order,
                table=tuple(tuple(row) for row in model.table.table),
                identity=model.table.identity,
                generators=tuple(model.table.generators),
            )
    return GroupSpec(
        kind=model.kind, rank=model.rank, degree=model.degree, table=table
    )


def _derived_base(spec: GroupSpec) -> GroupSpec:
    """The base group F/N under a group of the form F/N'."""
    if spec.kind == "free-solvable" and (spec.degree or 0) >= 2:
        return GroupSpec(kind="free-solvable", rank=spec.rank, degree=spec.degree - 1)
    if spec.kind == "derived-of-finite":
        return GroupSpec(kind="finite", table=spec.table)
    raise SolvGroupError(
        "the Magnus pair needs a derived group: free-solvable with degree >= 2 "
        "or derived-of-finite"
    )


def serialize_flow(flow: FlowMap, ctx) -> list[schemas.FlowRecord]:
    """Flow records with representative-word tails, sorted by edge key."""
    return [
        schemas.FlowRecord(
            tail=str(ctx.representative(tail)), generator=index, value=value
        )
        for (tail, index), value in flow.sorted_entries()
    ]


def create_app() -> FastAPI:
    app = FastAPI(title="solvgroup", version="0.1.0")
    oracle_cache: dict[GroupSpec, GroupOracle] = {}

    def get_oracle(spec: GroupSpec) -> GroupOracle:
        oracle = oracle_cache.get(spec)
        if oracle is None:
            oracle = make_oracle(spec)
            oracle_cache[spec] = oracle
        return oracle

    @app.exception_handler(SolvGroupError)
    async def _domain_error(request: Request, exc: SolvGroupError):
        code = "cap-exceeded" if isinstance(exc, CapExceededError) else "invalid-input"
        return JSONResponse(
            status_code=400,
            content={"detail": {"code": code, "message": str(exc)}},
        )

    @app.exception_handler(OverflowError)
    async def _overflow_error(request: Request, exc: OverflowError):
        return JSONResponse(
            status_code=400,
            content={"detail": {"code": "invalid-input", "message": str(exc)}},
        )

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok")

    @app.post("/wp", response_model=schemas.WordProblemResponse)
    def word_problem(request: schemas.WordRequest):
        oracle = get_oracle(_group_spec(request.group))
        word = parse_word(request.word, oracle.alphabet)
        return schemas.WordProblemResponse(trivial=oracle.wp(word))

    @app.post("/pp", response_model=schemas.PowerResponse)
    def power_problem(request: schemas.PairRequest):
        oracle = get_oracle(_group_spec(request.group))
        u = parse_word(request.u, oracle.alphabet)
        v = parse_word(request.v, oracle.alphabet)
        return schemas.PowerResponse(k=oracle.pp(u, v))

    @app.post("/cp", response_model=schemas.ConjugacyResponse)
    def conjugacy_problem(request: schemas.PairRequest):
        oracle = get_oracle(_group_spec(request.group))
        u = parse_word(request.u, oracle.alphabet)
        v = parse_word(request.v, oracle.alphabet)
        conjugator = oracle.cp(u, v)
        return schemas.ConjugacyResponse(
            conjugate=conjugator is not None,
            conjugator=None if conjugator is None else str(conjugator),
        )

    @app.post("/magnus", response_model=schemas.MagnusResponse)
    def magnus_pair(request: schemas.WordRequest):
        spec = _group_spec(request.group)
        base = get_oracle(_derived_base(spec))
        word = parse_word(request.word, base.alphabet)
        ctx = CayleyContext(base)
        element = magnus_image(base, word, ctx=ctx)
        return schemas.MagnusResponse(
            image=str(ctx.representative(element.image)),
            trivial=element.is_identity(),
            flow=serialize_flow(element.flow, ctx),
        )

    @app.post("/support", response_model=schemas.SupportResponse)
    def support_graph(request: schemas.SupportRequest):
        oracle = get_oracle(_group_spec(request.group))
        word = parse_word(request.word, oracle.alphabet)
        graph = build_support_graph(oracle, word)
        edges = [
            schemas.SupportEdge(
                tail=str(graph.vertices[tail]),
                head=str(graph.vertices[head]),
                generator=index,
            )
            for (tail, index), head in sorted(graph.edges.items())
        ]
        dot = None
        if request.dot:
            ctx = CayleyContext(oracle)
            dot = to_dot(graph, flow=flow_of(ctx, word))
        return schemas.SupportResponse(
            root=str(graph.vertices[graph.root]),
            vertices=[str(w) for _, w in sorted(graph.vertices.items())],
            edges=edges,
            dot=dot,
        )

    @app.post("/ssp/solve", response_model=schemas.SspSolveResponse)
    def ssp_solve(request: schemas.SspSolveRequest):
        instance = SspInstance.from_dict(request.instance.model_dump())
        solution = ssp_solve_brute(instance, cap=request.cap)
        return schemas.SspSolveResponse(
            solution=None if solution is None else list(solution)
        )

    @app.post("/ssp/from-zoe", response_model=schemas.SspFromZoeResponse)
    def ssp_from_zoe(request: schemas.SspFromZoeRequest):
        zoe = ZoeInstance(tuple(tuple(row) for row in request.matrix))
        instance = zoe_to_ssp(zoe, rank=request.rank)
        solution = ssp_solve_brute(instance, cap=request.cap)
        return schemas.SspFromZoeResponse(
            instance=schemas.SspInstanceModel(**instance.to_dict()),
            solution=None if solution is None else list(solution),
        )

    @app.post("/agp/solve", response_model=schemas.AgpSolveResponse)
    def agp_solve(request: schemas.AgpSolveRequest):
        instance = AgpInstance.from_dict(
            request.instance.model_dump(by_alias=True)
        )
        path = agp_solve_brute(instance, cap=request.cap)
        word = None
        if path is not None:
            label = Word()
            for edge_id in path:
                label = label * instance.edges[edge_id][2]
            word = str(label)
        return schemas.AgpSolveResponse(path=path, word=word)

    return app


app = create_app()
