from typing import Any, Dict, List

from fastapi import APIRouter, HTTPException, Response
from pydantic import ValidationError

from afcsim.core.exceptions import AfcsimError, UnknownCommandError
from afcsim.schemas.command import CommandMetadata
from afcsim.services.commands import CommandFactory
from afcsim.services.output import to_json

router = APIRouter()


@router.get("/commands", response_model=List[CommandMetadata])
def list_commands():
    return CommandFactory.list_commands()


@router.post("/commands/{name}")
def run_command(name: str, body: Dict[str, Any]):
    try:
        command = CommandFactory.get_command(name)
    except UnknownCommandError as e:
        raise HTTPException(status_code=404, detail=str(e))

    try:
        args = command.convert_args(body)
        table = command.execute(args)
    except ValidationError as e:
        raise HTTPException(status_code=422, detail=e.errors(include_url=False, include_context=False))
    except AfcsimError as e:
        raise HTTPException(status_code=422, detail=str(e))

    # rendered like the CLI's JSON output, which keeps infinite thresholds
    return Response(content=to_json(table), media_type="application/json")
