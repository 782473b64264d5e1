namespace bargain {}
