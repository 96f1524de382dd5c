from pydantic import BaseModel, Field
from typing import Optional, Any, Dict, List, Union


class FaceRef(BaseModel):
    ops: List[int] = Field(default_factory=list, description="degeneracy word, strictly decreasing")
    of: str


class CellEntry(BaseModel):
    id: str
    faces: List[FaceRef]


class BuildSpec(BaseModel):
    kind: str = Field(description="standard | horn | boundary | point | collapsed | groupoid | fixture | generator | pp")
    n: Optional[int] = None
    i: Optional[int] = None
    name: Optional[str] = None
    id: Optional[str] = None
    side: Optional[str] = None  # source | target
    cofibration: Optional[str] = None
    anodyne: Optional[str] = None


Decoration = Union[str, List[str], None]


class ObjectModel(BaseModel):
    name: Optional[str] = None
    build: Optional[BuildSpec] = None
    cells: Optional[Dict[str, List[Union[str, CellEntry]]]] = None
    truncated: bool = False
    marked: Decoration = None
    thin: Decoration = None
    lean: Decoration = None


class MapModel(BaseModel):
    source: Optional[str] = None
    target: Optional[str] = None
    build: Optional[Union[str, BuildSpec]] = None  # terminal | identity | inclusion | generator | fixture
    assignment: Optional[Dict[str, FaceRef]] = None


class DocumentModel(BaseModel):
    format: str
    meta: Dict[str, Any] = Field(default_factory=dict)
    objects: Dict[str, ObjectModel] = Field(default_factory=dict)
    maps: Dict[str, MapModel] = Field(default_factory=dict)


class StageModel(BaseModel):
    cells: List[str]
    marked: List[str] = Field(default_factory=list)
    thin: List[str] = Field(default_factory=list)
    lean: List[str] = Field(default_factory=list)


class StepModel(BaseModel):
    generator: str
    phase: str = ""
    attach: Dict[str, FaceRef]


class CertificateModel(BaseModel):
    format: str
    cap: int
    meta: Dict[str, Any] = Field(default_factory=dict)
    ambient: ObjectModel
    start: StageModel
    steps: List[StepModel]


class ManifestModel(BaseModel):
    format: str
    cap: int = 5
    budget: Optional[int] = None
    cofibrations: Dict[str, List[List[int]]]
    anodyne: Dict[str, List[List[Union[int, str]]]]
    # per family pair, e.g. {"C3xA2": {"cap": 6}}
    overrides: Dict[str, Dict[str, int]] = Field(default_factory=dict)


# -- API bodies -----------------------------------------------------------------

class ScriptedRequest(BaseModel):
    name: str = Field(description="indI | indII | nightmare | dual-nightmare | prism")
    params: Dict[str, Any] = Field(default_factory=dict)
    cap: Optional[int] = None
    budget: Optional[int] = None


class CaseRequest(BaseModel):
    cofibration: str
    anodyne: str
    cap: Optional[int] = None
    budget: Optional[int] = None


class RlpRequest(BaseModel):
    document: Dict[str, Any]
    map: str
    cls: str = "MB"
    generator: Optional[str] = None
    cap: Optional[int] = None
    budget: Optional[int] = None


class VerifyResultOut(BaseModel):
    ok: bool
    failing_step: Optional[int] = None
    reason: str = ""
    steps: int = 0
    digest: Optional[str] = None
