from .endpoints import certificates, covers, deviation, family, graphs, random_models
from .router import CommandRouter

api_router = CommandRouter()
api_router.include_router(family.router, tags=["Family"])
api_router.include_router(certificates.router, tags=["Certificates"])
api_router.include_router(graphs.router, tags=["Graphs"])
api_router.include_router(random_models.router, tags=["Random Models"])
api_router.include_router(deviation.router, tags=["Deviation"])
api_router.include_router(covers.router, tags=["Covers"])
