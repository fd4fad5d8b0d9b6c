"""
FastAPI Routes for the Nichols Algebra Engine
Read-only REST endpoints over groups, Hilbert series, Schubert classes and checks
"""
import logging
import os
import sys
import time
from datetime import datetime
from typing import List, Optional

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from app.agents.coxeter_agent import CoxeterAgent
from app.agents.validator import BudgetExceededError, CoxeterInputError
from app.agents.verify_agent import VerifyAgent
from app.models.schemas import CheckReport, GroupSummary, HilbertRow, RootRow, SchubertRow

logger = logging.getLogger(__name__)

# Initialize FastAPI app
app = FastAPI(
    title="Nichols Algebra Engine API",
    description="Exact computations in Nichols-Woronowicz algebras of finite Coxeter groups",
    version="1.0.0",
)

cache_dir = os.environ.get("NICHOLS_CACHE_DIR")
coxeter_agent = CoxeterAgent(cache_dir=cache_dir)
verify_agent = VerifyAgent(cache_dir=cache_dir, threads=1)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["GET"],
    allow_headers=["*"],
)

# ============================================================================
# REQUEST LOGGING MIDDLEWARE
# ============================================================================

@app.middleware("http")
async def log_requests(request: Request, call_next):
    """Log every API request with its duration"""
    start = time.perf_counter()
    response = await call_next(request)
    if request.url.path.startswith("/api/"):
        logger.info("%s %s -> %d (%.0f ms)", request.method, request.url.path,
                    response.status_code, (time.perf_counter() - start) * 1000)
    return response


def _system(label: str):
    try:
        return coxeter_agent.resolve(label)
    except CoxeterInputError as e:
        raise HTTPException(status_code=400, detail=str(e))


def _budget_error(e: BudgetExceededError) -> HTTPException:
    return HTTPException(
        status_code=413,
        detail=f"{e} (required {e.required}, budget {e.budget})"
    )

# ============================================================================
# API ENDPOINTS
# ============================================================================

@app.get("/", tags=["Root"])
async def root():
    """API welcome message"""
    return {
        "message": "Welcome to the Nichols Algebra Engine API",
        "version": "1.0.0",
        "docs": "/docs",
        "endpoints": {
            "group": "GET /api/group/{label}",
            "roots": "GET /api/roots/{label}",
            "hilbert": "GET /api/hilbert/{label}",
            "schubert": "GET /api/schubert/{label}",
            "verify": "GET /api/verify/{check}/{label}",
            "health": "GET /health"
        }
    }


@app.get("/health", tags=["Health"])
async def health_check():
    """Health check endpoint"""
    return {
        "status": "healthy",
        "timestamp": datetime.now().isoformat(),
        "checks": list(VerifyAgent.CHECKS)
    }


@app.get("/api/group/{label}", response_model=GroupSummary, tags=["Groups"])
def get_group(label: str):
    """
    Order, exponents and root data of a Coxeter group

    - 400 on an unknown label
    - 413 if the group is too large to enumerate
    """
    system = _system(label)
    try:
        return coxeter_agent.summary(system)
    except BudgetExceededError as e:
        raise _budget_error(e)


@app.get("/api/roots/{label}", response_model=List[RootRow], tags=["Groups"])
def get_roots(label: str):
    """
    Positive roots in simple-root coordinates

    - 413 if the root closure does not terminate within its bound
    """
    system = _system(label)
    try:
        return coxeter_agent.roots(system)
    except BudgetExceededError as e:
        raise _budget_error(e)


@app.get("/api/hilbert/{label}", response_model=List[HilbertRow], tags=["Algebra"])
def get_hilbert(
    label: str,
    max_degree: int = Query(4, ge=0, le=32, description="Highest degree"),
    quadratic: bool = Query(False, description="Also compute the quadratic cover")
):
    """
    Dimensions of the graded components

    - 413 if a component exceeds the word budget
    """
    system = _system(label)
    try:
        return coxeter_agent.hilbert(system, max_degree, quadratic)
    except BudgetExceededError as e:
        raise _budget_error(e)


@app.get("/api/schubert/{label}", response_model=List[SchubertRow], tags=["Algebra"])
def get_schubert(label: str):
    """Schubert classes of every group element"""
    system = _system(label)
    try:
        return coxeter_agent.schubert(system)
    except BudgetExceededError as e:
        raise _budget_error(e)


@app.get("/api/verify/{check}/{label}", response_model=CheckReport, tags=["Checks"])
def run_check(check: str, label: str, m: Optional[int] = Query(None, ge=2, description="Dihedral parameter")):
    """
    Run one named check

    - 404 on an unknown check
    - dihedral checks take m from the query or from an I2:m label
    """
    if check not in VerifyAgent.CHECKS:
        raise HTTPException(
            status_code=404,
            detail=f"Unknown check '{check}'. Available: {', '.join(VerifyAgent.CHECKS)}"
        )

    system = _system(label)
    params = {}
    if check in VerifyAgent.DIHEDRAL_CHECKS:
        if m is None and system.rank == 2:
            m = system.matrix[0][1]
        if m is None:
            raise HTTPException(status_code=400, detail=f"check '{check}' needs the parameter m")
        params['m'] = m

    try:
        return verify_agent.run_check(check, system, **params)
    except CoxeterInputError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except BudgetExceededError as e:
        raise _budget_error(e)
