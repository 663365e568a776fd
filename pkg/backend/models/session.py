from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator


class SideSpec(BaseModel):
    """One covering of a correspondence as written in a session file."""

    presentation: str
    coloring: Dict[str, str]
    degree: int = Field(..., ge=1)
    marked: Optional[List[str]] = None
    locus: Optional[str] = None


class CorrespondenceSpec(BaseModel):
    left: SideSpec
    right: Optional[SideSpec] = None
    source: Optional[str] = None
    target: Optional[str] = None


class ExtensionSpec(BaseModel):
    degree: Optional[int] = Field(default=None, ge=1)
    images: Dict[str, str] = Field(default_factory=dict)


class CompositionRequest(BaseModel):
    """Pair to compose, with optional middle geometry (presentation ref plus extensions).

    Side arcs are either middle generator names shared with the factor or a
    map from middle generator to factor generator.
    """

    model_config = ConfigDict(populate_by_name=True)

    left: str
    right: str
    middle: Optional[str] = None
    side1: Union[Dict[str, str], List[str]] = Field(default_factory=list, alias='side1_arcs')
    side2: Union[Dict[str, str], List[str]] = Field(default_factory=list, alias='side2_arcs')
    left_extension: Optional[ExtensionSpec] = None
    right_extension: Optional[ExtensionSpec] = None

    @field_validator('left_extension', 'right_extension', mode='before')
    @classmethod
    def bare_images(cls, value: Any):
        if isinstance(value, dict) and 'images' not in value:
            return {'images': value}
        return value


class SessionFile(BaseModel):
    """Presentations, correspondences and composition requests of one run."""

    model_config = ConfigDict(populate_by_name=True)

    presentations: Dict[str, Dict[str, Any]] = Field(default_factory=dict)
    correspondences: Dict[str, CorrespondenceSpec] = Field(default_factory=dict)
    cyclic_covers: List[int] = Field(default_factory=list, alias='cyclic')
    units: List[str] = Field(default_factory=list)
    requests: List[CompositionRequest] = Field(default_factory=list)
