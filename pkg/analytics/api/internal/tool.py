from rest_framework import permissions, status, viewsets
from rest_framework.decorators import action
from rest_framework.exceptions import NotFound
from rest_framework.response import Response

from analytics.exceptions import AnalyticsError, ToolError, UnknownTool
from analytics.tools import builtin_registry
from analytics.tools.rpc import RpcError, invoke_from_data


class InternalAPIToolViewSet(viewsets.ViewSet):
    """
    The tool catalog; ``invoke`` takes the body of a JSON-RPC ``tools/invoke`` call.
    """
    permission_classes = (permissions.IsAdminUser,)
    lookup_field = 'name'
    lookup_value_regex = '[^/]+'
    registry = None

    def get_registry(self):
        if self.registry is None:
            InternalAPIToolViewSet.registry = builtin_registry()
        return self.registry

    def list(self, request):
        return Response(self.get_registry().describe_all())

    def retrieve(self, request, name=None):
        try:
            return Response(self.get_registry().describe(name))
        except UnknownTool as e:
            raise NotFound(e.message)

    @action(detail=True, methods=['post'])
    def invoke(self, request, name=None):
        registry = self.get_registry()
        if name not in registry:
            raise NotFound('unknown tool %r' % name)
        data = dict(request.data, name=name)
        try:
            return Response(invoke_from_data(registry, data))
        except RpcError as e:
            body = {'code': e.code, 'message': e.message}
            if e.data is not None:
                body['data'] = e.data
            return Response(body, status=status.HTTP_400_BAD_REQUEST)
        except ToolError as e:
            return Response(dict(e.as_dict(), code=e.rpc_code), status=status.HTTP_422_UNPROCESSABLE_ENTITY)
        except AnalyticsError as e:
            return Response(e.as_dict(), status=status.HTTP_400_BAD_REQUEST)
