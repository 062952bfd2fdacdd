"""HTTP front end over the same runner the CLI uses.

Run with ``uvicorn qperceptron.service:app``.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from .report import Config, dump_circuit, emit, execute
from .statevector import SizeError


class RunRequest(BaseModel):
    ac: int = Field(ge=0)
    n_inputs: int = Field(2, ge=1)
    weight_bits: int = Field(2, ge=1)
    predicate: Literal["equal", "geq"] = "equal"
    mode: Literal["weights", "joint", "tune"] = "weights"
    inputs: Optional[list[int]] = None
    iterations: Union[Literal["auto"], int] = "auto"
    max_k: Optional[int] = Field(None, ge=1)
    shots: int = Field(0, ge=0)
    seed: int = 0

    def to_config(self, fmt: str = "json") -> Config:
        try:
            return Config(**self.model_dump(), format=fmt)
        except SizeError as exc:
            raise HTTPException(status_code=413, detail=str(exc)) from None
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None


class Plan(BaseModel):
    n: int
    l: int
    iterations: int


class DistributionEntry(BaseModel):
    bits: dict[str, str]
    values: dict[str, int]
    inputs: list[int]
    h_input: int
    prob: float
    verified: bool


class Solution(BaseModel):
    inputs: list[int]
    weights: list[int]
    bits: str


class RunResponse(BaseModel):
    config: dict
    plan: Plan
    registers: list[str]
    distribution: list[DistributionEntry]
    solutions: list[Solution]
    solution_mass: float
    no_solutions_detected: bool
    weight_marginal: Optional[dict[str, float]] = None
    counts: Optional[dict[str, int]] = None
    tune: Optional[dict] = None


app = FastAPI(title="qperceptron")


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/run", response_model=RunResponse, response_model_exclude_none=True)
def run(request: RunRequest):
    return execute(request.to_config()).to_dict()


@app.post("/run/{fmt}", response_class=PlainTextResponse)
def run_rendered(fmt: Literal["text", "csv", "json"], request: RunRequest):
    return emit(execute(request.to_config(fmt)))


@app.post("/circuit", response_class=PlainTextResponse)
def circuit(request: RunRequest):
    return dump_circuit(request.to_config())
