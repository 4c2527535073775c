"""
dependencies.py
This file contains dependency definitions for the sensing service.
"""

from fastapi import Depends

from spectrum_sensing.repositories.implementations.file_repo import FileResultRepo
from spectrum_sensing.repositories.interfaces.iface_result_repo import (
    ResultRepoInterface,
)
from spectrum_sensing.services.harness import ExperimentHarness
from spectrum_sensing.services.sensing_service import SensingService

_RESULT_REPO_SINGLETON: ResultRepoInterface | None = None
# Shared so the result cache survives across requests
_SENSING_SERVICE_SINGLETON: SensingService | None = None


async def get_result_repo() -> ResultRepoInterface:
    global _RESULT_REPO_SINGLETON
    if _RESULT_REPO_SINGLETON is None:
        _RESULT_REPO_SINGLETON = FileResultRepo()
    return _RESULT_REPO_SINGLETON


async def get_sensing_service(
    result_repo: ResultRepoInterface = Depends(get_result_repo),
) -> SensingService:
    global _SENSING_SERVICE_SINGLETON
    if _SENSING_SERVICE_SINGLETON is None:
        _SENSING_SERVICE_SINGLETON = SensingService(ExperimentHarness(result_repo))
    return _SENSING_SERVICE_SINGLETON
