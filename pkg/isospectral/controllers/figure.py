"""Controller for figure data endpoints."""

from typing import Annotated, Any

from litestar import Controller, get
from litestar.exceptions import NotFoundException
from litestar.params import Parameter

from isospectral.figures import figure_table
from isospectral.models import FigureTag


class FigureController(Controller):
    """Controller for the data behind each figure."""

    path = "/figures"
    tags = ["figures"]

    @get("/")
    async def list_figures(self) -> list[str]:
        """List the figure tags."""
        return [tag.value for tag in FigureTag]

    @get("/{tag:str}", sync_to_thread=True)
    def get_figure(
        self,
        tag: str,
        lambda_count: Annotated[int, Parameter(query="points", ge=1, le=61, default=13)],
    ) -> dict[str, Any]:
        """Get the rows of one figure as JSON records."""
        if tag not in {t.value for t in FigureTag}:
            raise NotFoundException(detail=f"unknown figure {tag!r}")
        title, frame = figure_table(tag, threads=1, lambda_count=lambda_count)
        rows = frame.astype(object).where(frame.notna(), None).to_dict(orient="records")
        return {"figure": tag, "title": title, "rows": rows}
